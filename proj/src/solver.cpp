#include "nsf/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nsf::solver {
namespace {

using thermo::ThermoClosure;

constexpr std::size_t G = Grid1D::kGhost;

double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}

std::vector<double> slopes(const std::vector<double>& f, Limiter limiter) {
  std::vector<double> s(f.size(), 0.0);
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    s[i] = limiter == Limiter::Minmod ? minmod(f[i] - f[i - 1], f[i + 1] - f[i])
                                      : 0.5 * (f[i + 1] - f[i - 1]);
  }
  return s;
}

struct FaceState {
  double rho, u, mom, energy, p, c;
};

FaceState face_state(const ThermoClosure& closure, double rho, double u, double theta, double t,
                     std::size_t face) {
  if (!(rho > 0.0) || !(theta > 0.0) || !std::isfinite(u)) {
    throw PositivityLoss(t, face, rho > 0.0 ? "theta" : "rho",
                         "nonpositive reconstructed face state");
  }
  try {
    const thermo::EosEval ev = thermo::eos_eval(closure, {rho, theta});
    const double c = std::sqrt(thermo::sound_speed_squared(ev, {rho, theta}));
    return {rho, u, rho * u, rho * (ev.e + 0.5 * u * u), ev.p, c};
  } catch (const DomainError& e) {
    throw PositivityLoss(t, face, "theta", e.what());
  } catch (const RangeError& e) {
    throw PositivityLoss(t, face, "theta", e.what());
  }
}

void check_sizes(const Grid1D& grid, std::size_t n, const char* what) {
  if (n != grid.size()) {
    throw ArgumentError(std::string(what) + ": field length " + std::to_string(n) +
                        " does not match grid size " + std::to_string(grid.size()));
  }
}

std::array<double, 3> source_totals(const ThermoClosure& closure, const Grid1D& grid,
                                    const ManufacturedSolution& mms, double t) {
  std::array<double, 3> acc{};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto q = mms.source(closure, t, grid.x(i));
    for (int k = 0; k < 3; ++k) acc[k] += q[k];
  }
  for (double& a : acc) a *= grid.dx();
  return acc;
}

}  // namespace

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Completed:
      return "completed";
    case StopReason::RegularityMonitor:
      return "regularity-monitor";
    case StopReason::PositivityLoss:
      return "positivity-loss";
  }
  return "unknown";
}

Grid1D::Grid1D(std::size_t cells, double length) : n_(cells), length_(length) {
  if (cells < 8) throw ArgumentError("grid needs N >= 8, got " + std::to_string(cells));
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw ArgumentError("grid length must be positive and finite");
  }
  dx_ = length_ / static_cast<double>(n_);
}

std::vector<double> Grid1D::centers() const {
  std::vector<double> xs(n_);
  for (std::size_t i = 0; i < n_; ++i) xs[i] = x(i);
  return xs;
}

State state_from_primitives(const ThermoClosure& closure, std::span<const double> rho,
                            std::span<const double> u, std::span<const double> theta, double t) {
  if (rho.size() != u.size() || rho.size() != theta.size()) {
    throw ArgumentError("state_from_primitives: field lengths differ");
  }
  State s;
  s.t = t;
  s.rho.assign(rho.begin(), rho.end());
  s.mom.resize(rho.size());
  s.energy.resize(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double e = thermo::eos_eval(closure, {rho[i], theta[i]}).e;
    s.mom[i] = rho[i] * u[i];
    s.energy[i] = rho[i] * (e + 0.5 * u[i] * u[i]);
  }
  return s;
}

Primitives primitives(const ThermoClosure& closure, const State& state,
                      std::span<const double> theta_guess) {
  const std::size_t n = state.size();
  Primitives p;
  p.rho = state.rho;
  p.u.resize(n);
  p.theta.resize(n);
  p.p.resize(n);
  p.xi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double rho = state.rho[i];
    if (!(rho > 0.0) || !std::isfinite(rho)) {
      throw PositivityLoss(state.t, i, "rho", "density " + std::to_string(rho));
    }
    const double u = state.mom[i] / rho;
    const double e_int = state.energy[i] / rho - 0.5 * u * u;
    const double guess = theta_guess.size() == n ? theta_guess[i] : -1.0;
    double theta;
    try {
      theta = thermo::invert_temperature(closure, rho, e_int, guess);
    } catch (const std::exception& e) {
      throw PositivityLoss(state.t, i, "theta", e.what());
    }
    p.u[i] = u;
    p.theta[i] = theta;
    p.p[i] = thermo::eos_eval(closure, {rho, theta}).p;
    p.xi[i] = thermo::scaled_temperature(closure, theta);
  }
  return p;
}

Primitives primitives_from_fields(const ThermoClosure& closure, std::vector<double> rho,
                                  std::vector<double> u, std::vector<double> theta) {
  if (rho.size() != u.size() || rho.size() != theta.size()) {
    throw ArgumentError("primitives_from_fields: field lengths differ");
  }
  Primitives p;
  p.p.resize(rho.size());
  p.xi.resize(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    p.p[i] = thermo::eos_eval(closure, {rho[i], theta[i]}).p;
    p.xi[i] = thermo::scaled_temperature(closure, theta[i]);
  }
  p.rho = std::move(rho);
  p.u = std::move(u);
  p.theta = std::move(theta);
  return p;
}

GhostedFields apply_boundary(const Grid1D& grid, const Primitives& prim) {
  const std::size_t n = grid.size();
  check_sizes(grid, prim.size(), "apply_boundary");
  GhostedFields g;
  g.rho.resize(n + 2 * G);
  g.u.resize(n + 2 * G);
  g.theta.resize(n + 2 * G);
  for (std::size_t i = 0; i < n; ++i) {
    g.rho[i + G] = prim.rho[i];
    g.u[i + G] = prim.u[i];
    g.theta[i + G] = prim.theta[i];
  }
  for (std::size_t k = 0; k < G; ++k) {
    // ghost G-1-k mirrors cell k; ghost n+G+k mirrors cell n-1-k
    const std::size_t lo = G - 1 - k;
    const std::size_t hi = n + G + k;
    g.rho[lo] = prim.rho[k];
    g.theta[lo] = prim.theta[k];
    g.u[lo] = -prim.u[k];
    g.rho[hi] = prim.rho[n - 1 - k];
    g.theta[hi] = prim.theta[n - 1 - k];
    g.u[hi] = -prim.u[n - 1 - k];
  }
  return g;
}

FaceFluxes face_fluxes(const ThermoClosure& closure, const Grid1D& grid,
                       const GhostedFields& gf, Limiter limiter, double t) {
  const std::size_t n = grid.size();
  const double dx = grid.dx();
  const auto s_rho = slopes(gf.rho, limiter);
  const auto s_u = slopes(gf.u, limiter);
  const auto s_th = slopes(gf.theta, limiter);

  FaceFluxes f;
  f.mass.resize(n + 1);
  f.mom.resize(n + 1);
  f.energy.resize(n + 1);
  for (std::size_t face = 0; face <= n; ++face) {
    const std::size_t l = face + G - 1;
    const std::size_t r = face + G;
    const FaceState L = face_state(closure, gf.rho[l] + 0.5 * s_rho[l], gf.u[l] + 0.5 * s_u[l],
                                   gf.theta[l] + 0.5 * s_th[l], t, face);
    const FaceState R = face_state(closure, gf.rho[r] - 0.5 * s_rho[r], gf.u[r] - 0.5 * s_u[r],
                                   gf.theta[r] - 0.5 * s_th[r], t, face);
    const double smax = std::max(std::abs(L.u) + L.c, std::abs(R.u) + R.c);

    const double conv_mass = 0.5 * (L.mom + R.mom) - 0.5 * smax * (R.rho - L.rho);
    const double conv_mom = 0.5 * (L.mom * L.u + L.p + R.mom * R.u + R.p) - 0.5 * smax * (R.mom - L.mom);
    const double conv_energy = 0.5 * ((L.energy + L.p) * L.u + (R.energy + R.p) * R.u) -
                               0.5 * smax * (R.energy - L.energy);

    // Newton stress (4/3) mu u_x and Fourier flux -kappa theta_x from the adjacent cells.
    const double theta_face = 0.5 * (gf.theta[l] + gf.theta[r]);
    const double u_face = 0.5 * (gf.u[l] + gf.u[r]);
    const double u_x = (gf.u[r] - gf.u[l]) / dx;
    const double theta_x = (gf.theta[r] - gf.theta[l]) / dx;
    const thermo::Transport tr = thermo::transport(closure, theta_face);
    const double stress = (4.0 / 3.0) * tr.mu * u_x;
    const double heat = -tr.kappa * theta_x;

    f.mass[face] = conv_mass;
    f.mom[face] = conv_mom - stress;
    f.energy[face] = conv_energy - stress * u_face + heat;
  }
  return f;
}

Rhs rhs(const ThermoClosure& closure, const Grid1D& grid, const State& state,
        const Primitives& prim, Limiter limiter, const ManufacturedSolution* mms) {
  const std::size_t n = grid.size();
  check_sizes(grid, state.size(), "rhs");
  const FaceFluxes f = face_fluxes(closure, grid, apply_boundary(grid, prim), limiter, state.t);
  const double inv_dx = 1.0 / grid.dx();
  Rhs out;
  out.d_rho.resize(n);
  out.d_mom.resize(n);
  out.d_energy.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.d_rho[i] = -(f.mass[i + 1] - f.mass[i]) * inv_dx;
    out.d_mom[i] = -(f.mom[i + 1] - f.mom[i]) * inv_dx;
    out.d_energy[i] = -(f.energy[i + 1] - f.energy[i]) * inv_dx;
  }
  if (mms != nullptr) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto q = mms->source(closure, state.t, grid.x(i));
      out.d_rho[i] += q[0];
      out.d_mom[i] += q[1];
      out.d_energy[i] += q[2];
    }
  }
  return out;
}

DtInfo stable_dt(const ThermoClosure& closure, const Grid1D& grid, const Primitives& prim,
                 const DtPolicy& policy) {
  check_sizes(grid, prim.size(), "stable_dt");
  double max_speed = 0.0;
  double diff_limit = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < prim.size(); ++i) {
    const thermo::ThermoState st{prim.rho[i], prim.theta[i]};
    const thermo::EosEval ev = thermo::eos_eval(closure, st);
    const double c = std::sqrt(thermo::sound_speed_squared(ev, st));
    max_speed = std::max(max_speed, std::abs(prim.u[i]) + c);
    const thermo::Transport tr = thermo::transport(closure, st.theta);
    diff_limit = std::min({diff_limit, st.rho * ev.de_dtheta / tr.kappa, st.rho / tr.mu});
  }
  const double dx = grid.dx();
  DtInfo info{};
  info.max_wave_speed = max_speed;
  info.dt_adv = policy.cfl_adv * dx / max_speed;
  info.dt_diff = policy.cfl_diff * dx * dx * diff_limit;
  info.dt = 1.0 / (1.0 / info.dt_adv + 1.0 / info.dt_diff);
  return info;
}

State step(const ThermoClosure& closure, const Grid1D& grid, const State& state, double dt,
           Limiter limiter, const ManufacturedSolution* mms, std::array<double, 3>* injected,
           Primitives* prim_cache) {
  const std::size_t n = grid.size();
  const Primitives p0 = prim_cache != nullptr && prim_cache->size() == n
                            ? *prim_cache
                            : primitives(closure, state);
  const Rhs k0 = rhs(closure, grid, state, p0, limiter, mms);

  State s1;
  s1.t = state.t + dt;
  s1.rho.resize(n);
  s1.mom.resize(n);
  s1.energy.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s1.rho[i] = state.rho[i] + dt * k0.d_rho[i];
    s1.mom[i] = state.mom[i] + dt * k0.d_mom[i];
    s1.energy[i] = state.energy[i] + dt * k0.d_energy[i];
  }
  const Primitives p1 = primitives(closure, s1, p0.theta);
  const Rhs k1 = rhs(closure, grid, s1, p1, limiter, mms);

  State s2;
  s2.t = s1.t;
  s2.rho.resize(n);
  s2.mom.resize(n);
  s2.energy.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s2.rho[i] = 0.5 * state.rho[i] + 0.5 * (s1.rho[i] + dt * k1.d_rho[i]);
    s2.mom[i] = 0.5 * state.mom[i] + 0.5 * (s1.mom[i] + dt * k1.d_mom[i]);
    s2.energy[i] = 0.5 * state.energy[i] + 0.5 * (s1.energy[i] + dt * k1.d_energy[i]);
  }
  Primitives p2 = primitives(closure, s2, p1.theta);

  if (injected != nullptr && mms != nullptr) {
    const auto q0 = source_totals(closure, grid, *mms, state.t);
    const auto q1 = source_totals(closure, grid, *mms, s1.t);
    for (int k = 0; k < 3; ++k) (*injected)[k] += 0.5 * dt * (q0[k] + q1[k]);
  }
  if (prim_cache != nullptr) *prim_cache = std::move(p2);
  return s2;
}

RunResult run(const ThermoClosure& closure, const Grid1D& grid, State initial,
              const RunSettings& settings) {
  if (!(settings.t_end > 0.0) || !(settings.output_dt > 0.0)) {
    throw ArgumentError("run: t_end and output_dt must be positive");
  }
  check_sizes(grid, initial.size(), "run");
  RunResult result;
  Trajectory& traj = result.trajectory;

  State state = std::move(initial);
  Primitives prim = primitives(closure, state);
  std::array<double, 3> injected{};
  traj.snapshots.push_back({state.t, state, prim, injected});

  const double t0 = state.t;
  std::size_t output_index = 1;
  auto output_time = [&](std::size_t k) {
    return std::min(t0 + static_cast<double>(k) * settings.output_dt, settings.t_end);
  };

  if (max_velocity_gradient(grid, prim.u) > settings.g_threshold) {
    result.stop_reason = StopReason::RegularityMonitor;
    result.stop_detail = "initial velocity gradient exceeds G_threshold";
    result.stop_time = state.t;
    return result;
  }

  std::size_t steps = 0;
  while (state.t < settings.t_end) {
    if (++steps > settings.max_steps) {
      throw NumericError("run exceeded max_steps=" + std::to_string(settings.max_steps));
    }
    const double target = output_time(output_index);
    const DtInfo info = stable_dt(closure, grid, prim, settings.dt_policy);
    double dt = info.dt;
    bool hits_output = false;
    if (state.t + dt >= target * (1.0 - 1e-14)) {
      dt = target - state.t;
      hits_output = true;
    }
    State next;
    try {
      next = step(closure, grid, state, dt, settings.limiter, settings.mms, &injected, &prim);
    } catch (const PositivityLoss& e) {
      result.stop_reason = StopReason::PositivityLoss;
      result.stop_detail = e.what();
      result.stop_time = e.time();
      if (traj.snapshots.back().t < state.t) {
        traj.snapshots.push_back({state.t, state, primitives(closure, state), injected});
      }
      return result;
    }
    if (hits_output) next.t = target;
    const double dx = grid.dx();
    traj.step_log.push_back({state.t, dt, dt * info.max_wave_speed / dx,
                             dt * settings.dt_policy.cfl_diff / info.dt_diff});
    state = std::move(next);

    const double grad = max_velocity_gradient(grid, prim.u);
    if (grad > settings.g_threshold) {
      traj.snapshots.push_back({state.t, state, prim, injected});
      result.stop_reason = StopReason::RegularityMonitor;
      result.stop_detail = "max |du/dx| = " + std::to_string(grad) + " exceeds G_threshold = " +
                           std::to_string(settings.g_threshold);
      result.stop_time = state.t;
      return result;
    }
    if (hits_output) {
      traj.snapshots.push_back({state.t, state, prim, injected});
      ++output_index;
    }
  }
  result.stop_time = state.t;
  return result;
}

std::array<double, 3> totals(const Grid1D& grid, const State& state) {
  std::array<double, 3> acc{};
  for (std::size_t i = 0; i < state.size(); ++i) {
    acc[0] += state.rho[i];
    acc[1] += state.mom[i];
    acc[2] += state.energy[i];
  }
  for (double& a : acc) a *= grid.dx();
  return acc;
}

std::vector<double> centered_gradient(const Grid1D& grid, std::span<const double> f,
                                      bool odd_about_walls) {
  const std::size_t n = grid.size();
  check_sizes(grid, f.size(), "centered_gradient");
  const double sign = odd_about_walls ? -1.0 : 1.0;
  const double inv = 0.5 / grid.dx();
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i == 0 ? sign * f[0] : f[i - 1];
    const double right = i + 1 == n ? sign * f[n - 1] : f[i + 1];
    g[i] = (right - left) * inv;
  }
  return g;
}

double max_velocity_gradient(const Grid1D& grid, std::span<const double> u) {
  double m = 0.0;
  for (double g : centered_gradient(grid, u, true)) m = std::max(m, std::abs(g));
  return m;
}

}  // namespace nsf::solver
