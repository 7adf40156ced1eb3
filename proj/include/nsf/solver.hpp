#pragma once

// Finite-volume solver for the 1-D slab reduction of the Navier-Stokes-Fourier
// system in conservative variables (rho, rho u, E = rho e + rho u^2 / 2).
// Walls at x = 0 and x = L carry no-slip (u = 0) and no-flux (q = 0) conditions,
// so total mass and total energy are conserved exactly by the discrete update.

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nsf/thermo.hpp"

namespace nsf::solver {

class Grid1D {
public:
  static constexpr std::size_t kGhost = 2;

  Grid1D(std::size_t cells, double length);

  std::size_t size() const noexcept { return n_; }
  double length() const noexcept { return length_; }
  double dx() const noexcept { return dx_; }
  double x(std::size_t i) const noexcept { return (static_cast<double>(i) + 0.5) * dx_; }
  std::vector<double> centers() const;

  friend bool operator==(const Grid1D&, const Grid1D&) = default;

private:
  std::size_t n_;
  double length_;
  double dx_;
};

/// Conservative cell averages.
struct State {
  std::vector<double> rho;
  std::vector<double> mom;
  std::vector<double> energy;
  double t = 0.0;

  std::size_t size() const noexcept { return rho.size(); }
};

struct Primitives {
  std::vector<double> rho;
  std::vector<double> u;
  std::vector<double> theta;
  std::vector<double> p;
  std::vector<double> xi;  // scaled temperature K(theta)

  std::size_t size() const noexcept { return rho.size(); }
};

/// Cell fields extended by Grid1D::kGhost mirror cells on each side.
struct GhostedFields {
  std::vector<double> rho;
  std::vector<double> u;
  std::vector<double> theta;
};

struct FaceFluxes {
  // N+1 faces; face f sits between cells f-1 and f.
  std::vector<double> mass;
  std::vector<double> mom;
  std::vector<double> energy;
};

struct Rhs {
  std::vector<double> d_rho;
  std::vector<double> d_mom;
  std::vector<double> d_energy;
};

enum class Limiter { Minmod, None };

/// Closed-form target fields with a pointwise source that makes them an exact
/// solution of the forced system:
///   rho   = rho0 + cos(kx) cos t
///   u     = amp sin(kx) sin t
///   theta = theta0 + cos(kx) cos t,   k = 2 pi m / L.
class ManufacturedSolution {
public:
  struct Params {
    double rho0 = 2.0;
    double theta0 = 1.5;
    double velocity_amplitude = 1.0;
    int mode = 1;
  };

  struct Fields {
    double rho, u, theta;
    double rho_t, u_t, theta_t;
    double rho_x, u_x, theta_x;
    double u_xx, theta_xx;
  };

  ManufacturedSolution(double length, Params params);
  explicit ManufacturedSolution(double length) : ManufacturedSolution(length, Params{}) {}

  Fields fields(double t, double x) const;
  /// Source for (mass, momentum, energy) at a point.
  std::array<double, 3> source(const thermo::ThermoClosure& closure, double t, double x) const;
  const Params& params() const noexcept { return params_; }

private:
  double k_;
  Params params_;
};

struct DtPolicy {
  double cfl_adv = 0.4;
  double cfl_diff = 0.25;
};

struct DtInfo {
  double dt;
  double dt_adv;
  double dt_diff;
  double max_wave_speed;
};

struct StepInfo {
  double t;  // time at the start of the step
  double dt;
  double cfl_adv;   // dt * max(|u|+c) / dx
  double cfl_diff;  // dt / (dx^2 min(rho c_v / kappa, rho / mu))
};

struct Snapshot {
  double t;
  State state;
  Primitives prim;
  std::array<double, 3> injected{};  // time-integrated source of (M, momentum, E) up to t
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  std::vector<StepInfo> step_log;
};

enum class StopReason { Completed, RegularityMonitor, PositivityLoss };

std::string_view to_string(StopReason reason);

struct RunSettings {
  double t_end = 0.1;
  double output_dt = 0.01;
  DtPolicy dt_policy;
  Limiter limiter = Limiter::Minmod;
  double g_threshold = std::numeric_limits<double>::infinity();
  const ManufacturedSolution* mms = nullptr;
  std::size_t max_steps = 10'000'000;
};

struct RunResult {
  Trajectory trajectory;
  StopReason stop_reason = StopReason::Completed;
  std::string stop_detail;
  double stop_time = 0.0;
};

/// State from point values of (rho, u, theta).
State state_from_primitives(const thermo::ThermoClosure& closure, std::span<const double> rho,
                            std::span<const double> u, std::span<const double> theta,
                            double t = 0.0);

/// u = mom/rho, theta from rho e = E - rho u^2/2, then p and Xi.
/// `theta_guess` (same length, optional) seeds the temperature inversion.
/// Throws PositivityLoss naming the cell.
Primitives primitives(const thermo::ThermoClosure& closure, const State& state,
                      std::span<const double> theta_guess = {});

/// Recomputes p and Xi for stored (rho, u, theta).
Primitives primitives_from_fields(const thermo::ThermoClosure& closure, std::vector<double> rho,
                                  std::vector<double> u, std::vector<double> theta);

/// Mirror ghosts: rho and theta even, u odd about each wall.
GhostedFields apply_boundary(const Grid1D& grid, const Primitives& prim);

/// Rusanov + MUSCL convective flux minus the Newton stress and Fourier flux, per face.
FaceFluxes face_fluxes(const thermo::ThermoClosure& closure, const Grid1D& grid,
                       const GhostedFields& ghosted, Limiter limiter, double t = 0.0);

Rhs rhs(const thermo::ThermoClosure& closure, const Grid1D& grid, const State& state,
        const Primitives& prim, Limiter limiter, const ManufacturedSolution* mms = nullptr);

DtInfo stable_dt(const thermo::ThermoClosure& closure, const Grid1D& grid, const Primitives& prim,
                 const DtPolicy& policy);

/// One SSP-RK2 step; positivity is checked after each stage.
/// `injected` accumulates the time-integrated cell-summed source when non-null.
State step(const thermo::ThermoClosure& closure, const Grid1D& grid, const State& state, double dt,
           Limiter limiter, const ManufacturedSolution* mms = nullptr,
           std::array<double, 3>* injected = nullptr, Primitives* prim_cache = nullptr);

/// Integrates to t_end, stopping early on positivity loss or when the velocity
/// gradient monitor exceeds g_threshold.
RunResult run(const thermo::ThermoClosure& closure, const Grid1D& grid, State initial,
              const RunSettings& settings);

/// Cell sums times dx: (mass, momentum, energy).
std::array<double, 3> totals(const Grid1D& grid, const State& state);

/// Centered derivative at cell centers using the mirror ghosts.
std::vector<double> centered_gradient(const Grid1D& grid, std::span<const double> field,
                                      bool odd_about_walls);

/// max |du/dx| at cell centers.
double max_velocity_gradient(const Grid1D& grid, std::span<const double> u);

}  // namespace nsf::solver
