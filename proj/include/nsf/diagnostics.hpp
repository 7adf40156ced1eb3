#pragma once

// Monitored functionals of slab states and trajectories: conservation, entropy
// production and balance, regularity monitor, comparison envelopes for the
// scaled temperature and density, relative entropy and its inequality.
//
// Everything here reads only (rho, u, theta) and the times of the frames, so a
// report recomputed from stored snapshots matches the one produced during the run.

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nsf/solver.hpp"
#include "nsf/thermo.hpp"

namespace nsf::diagnostics {

using solver::Grid1D;
using solver::Primitives;
using thermo::ThermoClosure;

struct Frame {
  double t = 0.0;
  Primitives prim;
  std::array<double, 3> injected{};  // integrated source of (M, momentum, E), forced runs only
};

using FrameSeries = std::vector<Frame>;

FrameSeries frames_from_trajectory(const solver::Trajectory& traj);

// ---------------------------------------------------------------- conservation

struct Conservation {
  double mass;     // sum rho dx
  double energy;   // sum (rho e + rho u^2 / 2) dx
  double entropy;  // sum rho s dx
};

Conservation conservation(const ThermoClosure& closure, const Grid1D& grid, const Primitives& prim);

// --------------------------------------------------------- entropy production

/// d/dx at cell centers through the wall mirrors (theta, rho even; u odd).
std::vector<double> wall_gradient(const Grid1D& grid, const std::vector<double>& f, bool odd);

struct EntropyProduction {
  std::vector<double> sigma;  // (1/theta)[(4/3) mu u_x^2 + kappa theta_x^2 / theta]
  double total;
  double min;
  double max;
};

EntropyProduction entropy_production(const ThermoClosure& closure, const Grid1D& grid,
                                     const Primitives& prim);

struct EntropyBalance {
  double delta_entropy;  // S_tot(t1) - S_tot(t0)
  double production;     // trapezoid in time of sum sigma dx
  double residual;       // delta_entropy - production
  double tol_disc;
};

/// Frames with t in [t0, t1]; needs at least two.
EntropyBalance entropy_balance(const ThermoClosure& closure, const Grid1D& grid,
                               const FrameSeries& frames, double t0, double t1);

double entropy_balance_residual(const ThermoClosure& closure, const Grid1D& grid,
                                const FrameSeries& frames, double t0, double t1);

/// Largest spacing between consecutive frame times.
double max_frame_spacing(const FrameSeries& frames);

/// Discretization allowance C (dx^2 + dt) * window for the integrated entropy
/// inequality and the relative entropy inequality.
double entropy_tolerance(double dx, double dt, double window);
double rei_tolerance(double dx, double dt, double window);

// ----------------------------------------------------------- regularity monitor

enum class MonitorVerdict { Within, Exceeded };

std::string_view to_string(MonitorVerdict verdict);

struct MonitorReport {
  double grad_u_inf;
  double div_u_inf;
  std::array<double, 3> sobolev;  // W^{k,2} norm of (rho, theta, u), k = 1, 2, 3
  MonitorVerdict verdict;
};

/// Centered derivative with second-order one-sided closures at the walls.
std::vector<double> one_sided_derivative(const Grid1D& grid, const std::vector<double>& f);

std::array<double, 3> sobolev_norms(const Grid1D& grid, const Primitives& prim);

MonitorReport regularity_monitor(const Grid1D& grid, const Primitives& prim, double g_threshold);

// ------------------------------------------------------------------ envelopes

struct EnvelopeSample {
  double t;
  double xi_min, xi_max, rho_min, rho_max;
  double xi_lower, rho_lower, rho_upper, xi_upper;
  double int_div;    // int_0^t ||u_x||_inf dt, plus its quadrature allowance
  double int_grad2;  // int_0^t ||u_x||_inf^2 dt, plus its quadrature allowance
};

struct EnvelopeReport {
  std::vector<EnvelopeSample> samples;
  double b_sup, b_inf;  // B = theta kappa / K * p_theta / (rho e_theta)
  double d_sup;         // D = kappa / (rho e_theta)
  double a_sup;         // (4/3) mu / K
  double tol;           // relative containment tolerance
  bool contained;
  std::string violation;  // first failure, empty when contained
};

EnvelopeReport comparison_envelopes(const ThermoClosure& closure, const Grid1D& grid,
                                    const FrameSeries& frames);

// ------------------------------------------------------------ relative entropy

struct ReferenceFields {
  std::vector<double> r;
  std::vector<double> theta;
  std::vector<double> u;
};

/// sum dx [ rho|u-U|^2/2 + H_Theta(rho,theta) - dH_Theta/drho(r,Theta)(rho-r) - H_Theta(r,Theta) ].
double relative_entropy(const ThermoClosure& closure, const Grid1D& grid, const Primitives& prim,
                        const ReferenceFields& ref);

/// sum dx (rho e + theta rho |s| + rho u^2/2); the natural size of relative entropy values.
double relative_entropy_scale(const ThermoClosure& closure, const Grid1D& grid,
                              const Primitives& prim);

// --------------------------------------------------------------- test trios

struct TrioPoint {
  double r, theta, u;
  double r_t, theta_t, u_t;
  double r_x, theta_x, u_x;
};

/// Closed-form comparison fields (r, Theta, U) with exact derivatives.
class TestTrio {
public:
  using Eval = std::function<TrioPoint(double t, double x)>;

  TestTrio(std::string id, double length, Eval eval);

  const std::string& id() const noexcept { return id_; }
  double length() const noexcept { return length_; }
  TrioPoint operator()(double t, double x) const { return eval_(t, x); }

  /// Checks r > 0 and Theta > 0 on the cell centers at each time, and U = 0 at both walls.
  /// Throws ArgumentError naming the condition and the sample point.
  void check_admissible(const Grid1D& grid, const std::vector<double>& times) const;

private:
  std::string id_;
  double length_;
  Eval eval_;
};

struct TrioInfo {
  std::string id;
  std::string description;
};

const std::vector<TrioInfo>& list_trios();
bool is_known_trio(std::string_view id);
std::string known_trio_ids();
TestTrio make_trio(std::string_view id, double length);

ReferenceFields trio_fields(const TestTrio& trio, const Grid1D& grid, double t);

struct ReiPoint {
  double t;
  double rel_entropy;  // E(t) against the trio
  double dissipation;  // cumulative int Theta/theta ((4/3) mu u_x^2 + kappa theta_x^2 / theta)
  double rhs;          // cumulative right-hand side
  double residual;     // rhs - (E(t) - E(0) + dissipation)
  double tol_disc;
};

/// Cumulative relative entropy inequality at every frame.
std::vector<ReiPoint> rei_series(const ThermoClosure& closure, const Grid1D& grid,
                                 const FrameSeries& frames, const TestTrio& trio);

/// Residual over [0, tau]; tau must be a frame time.
double rei_residual(const ThermoClosure& closure, const Grid1D& grid, const FrameSeries& frames,
                    const TestTrio& trio, double tau);

// ----------------------------------------------------------- weak-strong gap

/// E(a | b) at each shared frame time.
std::vector<double> weak_strong_gap(const ThermoClosure& closure, const Grid1D& grid,
                                    const FrameSeries& a, const FrameSeries& b);

struct GronwallCheck {
  double chi_hat;       // frozen rate for the scenario
  double horizon;       // T
  double bound;         // exp(chi_hat T)
  double max_ratio;     // max_t gap(t) / gap(0)
  double fitted_rate;   // max_t log(gap(t)/gap(0)) / t
  bool within;
};

/// Frozen Gronwall rate measured on the shipped perturbation runs of each scenario.
double frozen_gronwall_rate(std::string_view scenario);

GronwallCheck gronwall_check(std::string_view scenario, const std::vector<double>& times,
                             const std::vector<double>& gap);

// -------------------------------------------------------------------- report

struct ReportRow {
  double t;
  double mass, energy, entropy;
  double sigma_total, sigma_min;
  double grad_u_inf, div_u_inf;
  std::array<double, 3> sobolev;
  double xi_lower, rho_lower, rho_upper, xi_upper;
  std::optional<double> rel_entropy;
  std::optional<double> rei_residual;
  std::string stop_reason;
};

struct ReportOptions {
  std::string scenario;
  std::string stop_reason = "completed";
  double g_threshold = std::numeric_limits<double>::infinity();
  std::optional<TestTrio> trio;
  const FrameSeries* reference = nullptr;
  // Runs driven by a manufactured source: the unforced entropy and relative
  // entropy inequalities do not apply and their verdicts are left empty.
  bool forced = false;
};

struct ReportSummary {
  std::string stop_reason;
  double mass_drift;    // relative, net of injected source
  double energy_drift;  // relative, net of injected source
  bool conservation_ok;
  double sigma_min, sigma_max;
  bool sigma_nonnegative;
  EntropyBalance entropy;
  std::optional<bool> entropy_inequality_ok;
  double grad_u_initial, grad_u_max;
  bool monitor_exceeded;
  double b_sup, b_inf, d_sup, a_sup;
  double envelope_tol;
  bool envelopes_contained;
  std::string envelope_violation;
  std::optional<double> rei_min_margin;  // min over frames of residual + tol_disc
  std::optional<double> rei_tol_disc;    // at the final frame
  std::optional<bool> rei_ok;
  std::optional<double> gap_max;
  std::optional<GronwallCheck> gronwall;
};

struct DiagnosticsReport {
  std::vector<ReportRow> rows;
  ReportSummary summary;
};

DiagnosticsReport build_report(const ThermoClosure& closure, const Grid1D& grid,
                               const FrameSeries& frames, const ReportOptions& options);

}  // namespace nsf::diagnostics
