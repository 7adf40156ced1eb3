#include "nsf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace nsf::diagnostics {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Constants of the discretization allowances, fixed from refinement runs of the
// shipped scenarios (see README, "Tolerances").
constexpr double kEntropyTolConstant = 0.05;
constexpr double kReiTolConstant = 0.05;

constexpr double kConservationTol = 1e-11;
constexpr double kSigmaRoundoff = 1e-12;

void require_grid(const Grid1D& grid, const Primitives& prim, const char* what) {
  if (prim.rho.size() != grid.size() || prim.u.size() != grid.size() ||
      prim.theta.size() != grid.size()) {
    throw ArgumentError(std::string(what) + ": primitive fields do not match the grid (N=" +
                        std::to_string(grid.size()) + ")");
  }
}

void require_frames(const FrameSeries& frames, const char* what) {
  if (frames.empty()) throw ArgumentError(std::string(what) + ": empty trajectory");
}

double trapezoid_step(double t0, double t1, double f0, double f1) {
  return 0.5 * (t1 - t0) * (f0 + f1);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

FrameSeries frames_from_trajectory(const solver::Trajectory& traj) {
  FrameSeries out;
  out.reserve(traj.snapshots.size());
  for (const auto& s : traj.snapshots) out.push_back({s.t, s.prim, s.injected});
  return out;
}

Conservation conservation(const ThermoClosure& closure, const Grid1D& grid, const Primitives& prim) {
  require_grid(grid, prim, "conservation");
  Conservation c{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double rho = prim.rho[i];
    const thermo::EosEval ev = thermo::eos_eval(closure, {rho, prim.theta[i]});
    c.mass += rho;
    c.energy += rho * (ev.e + 0.5 * prim.u[i] * prim.u[i]);
    c.entropy += rho * ev.s;
  }
  c.mass *= grid.dx();
  c.energy *= grid.dx();
  c.entropy *= grid.dx();
  return c;
}

std::vector<double> wall_gradient(const Grid1D& grid, const std::vector<double>& f, bool odd) {
  return solver::centered_gradient(grid, f, odd);
}

EntropyProduction entropy_production(const ThermoClosure& closure, const Grid1D& grid,
                                     const Primitives& prim) {
  require_grid(grid, prim, "entropy_production");
  const auto u_x = wall_gradient(grid, prim.u, true);
  const auto th_x = wall_gradient(grid, prim.theta, false);
  EntropyProduction out{std::vector<double>(grid.size()), 0.0, kInf, -kInf};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double th = prim.theta[i];
    const thermo::Transport tr = thermo::transport(closure, th);
    const double s =
        ((4.0 / 3.0) * tr.mu * u_x[i] * u_x[i] + tr.kappa * th_x[i] * th_x[i] / th) / th;
    out.sigma[i] = s;
    out.total += s;
    out.min = std::min(out.min, s);
    out.max = std::max(out.max, s);
  }
  out.total *= grid.dx();
  return out;
}

double max_frame_spacing(const FrameSeries& frames) {
  double m = 0.0;
  for (std::size_t k = 1; k < frames.size(); ++k) m = std::max(m, frames[k].t - frames[k - 1].t);
  return m;
}

double entropy_tolerance(double dx, double dt, double window) {
  return kEntropyTolConstant * (dx * dx + dt) * window;
}

double rei_tolerance(double dx, double dt, double window) {
  return kReiTolConstant * (dx * dx + dt) * window;
}

EntropyBalance entropy_balance(const ThermoClosure& closure, const Grid1D& grid,
                               const FrameSeries& frames, double t0, double t1) {
  FrameSeries window;
  const double slack = 1e-12 * std::max(1.0, std::abs(t1));
  for (const Frame& f : frames) {
    if (f.t >= t0 - slack && f.t <= t1 + slack) window.push_back(f);
  }
  if (window.size() < 2) {
    throw ArgumentError("entropy_balance: need at least two frames in [" + fmt(t0) + ", " +
                        fmt(t1) + "]");
  }
  EntropyBalance b{};
  double prev_sigma = entropy_production(closure, grid, window.front().prim).total;
  for (std::size_t k = 1; k < window.size(); ++k) {
    const double sigma = entropy_production(closure, grid, window[k].prim).total;
    b.production += trapezoid_step(window[k - 1].t, window[k].t, prev_sigma, sigma);
    prev_sigma = sigma;
  }
  b.delta_entropy = conservation(closure, grid, window.back().prim).entropy -
                    conservation(closure, grid, window.front().prim).entropy;
  b.residual = b.delta_entropy - b.production;
  b.tol_disc = entropy_tolerance(grid.dx(), max_frame_spacing(window),
                                 window.back().t - window.front().t);
  return b;
}

double entropy_balance_residual(const ThermoClosure& closure, const Grid1D& grid,
                                const FrameSeries& frames, double t0, double t1) {
  return entropy_balance(closure, grid, frames, t0, t1).residual;
}

std::string_view to_string(MonitorVerdict verdict) {
  return verdict == MonitorVerdict::Exceeded ? "exceeded" : "within";
}

std::vector<double> one_sided_derivative(const Grid1D& grid, const std::vector<double>& f) {
  const std::size_t n = f.size();
  if (n < 3) throw ArgumentError("one_sided_derivative: need at least 3 values");
  const double inv = 0.5 / grid.dx();
  std::vector<double> d(n);
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) * inv;
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv;
  return d;
}

std::array<double, 3> sobolev_norms(const Grid1D& grid, const Primitives& prim) {
  require_grid(grid, prim, "sobolev_norms");
  // acc[j] = sum over fields of ||D^j f||_2^2
  std::array<double, 4> acc{};
  for (const std::vector<double>* field : {&prim.rho, &prim.theta, &prim.u}) {
    std::vector<double> d = *field;
    for (std::size_t j = 0; j < 4; ++j) {
      if (j > 0) d = one_sided_derivative(grid, d);
      double s = 0.0;
      for (double v : d) s += v * v;
      acc[j] += s * grid.dx();
    }
  }
  std::array<double, 3> out{};
  double partial = acc[0];
  for (std::size_t k = 1; k <= 3; ++k) {
    partial += acc[k];
    out[k - 1] = std::sqrt(partial);
  }
  return out;
}

MonitorReport regularity_monitor(const Grid1D& grid, const Primitives& prim, double g_threshold) {
  require_grid(grid, prim, "regularity_monitor");
  MonitorReport r{};
  r.grad_u_inf = solver::max_velocity_gradient(grid, prim.u);
  r.div_u_inf = r.grad_u_inf;
  r.sobolev = sobolev_norms(grid, prim);
  r.verdict = r.grad_u_inf > g_threshold ? MonitorVerdict::Exceeded : MonitorVerdict::Within;
  return r;
}

EnvelopeReport comparison_envelopes(const ThermoClosure& closure, const Grid1D& grid,
                                    const FrameSeries& frames) {
  require_frames(frames, "comparison_envelopes");
  EnvelopeReport rep{};
  rep.b_sup = 0.0;
  rep.b_inf = kInf;
  rep.d_sup = 0.0;
  rep.a_sup = 0.0;

  std::vector<double> div_inf(frames.size());
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const Primitives& p = frames[k].prim;
    require_grid(grid, p, "comparison_envelopes");
    div_inf[k] = solver::max_velocity_gradient(grid, p.u);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double rho = p.rho[i];
      const double th = p.theta[i];
      const thermo::EosEval ev = thermo::eos_eval(closure, {rho, th});
      const thermo::Transport tr = thermo::transport(closure, th);
      const double big_k = thermo::scaled_temperature(closure, th);
      const double b = th * tr.kappa / big_k * ev.dp_dtheta / (rho * ev.de_dtheta);
      rep.b_sup = std::max(rep.b_sup, b);
      rep.b_inf = std::min(rep.b_inf, b);
      rep.d_sup = std::max(rep.d_sup, tr.kappa / (rho * ev.de_dtheta));
      rep.a_sup = std::max(rep.a_sup, (4.0 / 3.0) * tr.mu / big_k);
    }
  }

  const Primitives& p0 = frames.front().prim;
  double xi0_min = kInf, xi0_max = 0.0;
  for (double th : p0.theta) {
    const double xi = thermo::scaled_temperature(closure, th);
    xi0_min = std::min(xi0_min, xi);
    xi0_max = std::max(xi0_max, xi);
  }
  const double rho0_min = *std::min_element(p0.rho.begin(), p0.rho.end());
  const double rho0_max = *std::max_element(p0.rho.begin(), p0.rho.end());

  rep.tol = 5.0 * grid.dx() * grid.dx();
  rep.contained = true;
  // Trapezoid integrals plus a quadrature allowance: half the step times the jump
  // of the integrand over each interval bounds the gap to any value between.
  double int_div = 0.0, int_grad2 = 0.0, allow_div = 0.0, allow_grad2 = 0.0;
  for (std::size_t k = 0; k < frames.size(); ++k) {
    if (k > 0) {
      const double dt = frames[k].t - frames[k - 1].t;
      const double g0 = div_inf[k - 1], g1 = div_inf[k];
      int_div += trapezoid_step(0.0, dt, g0, g1);
      int_grad2 += trapezoid_step(0.0, dt, g0 * g0, g1 * g1);
      allow_div += 0.5 * dt * std::abs(g1 - g0);
      allow_grad2 += 0.5 * dt * std::abs(g1 * g1 - g0 * g0);
    }
    const Primitives& p = frames[k].prim;
    EnvelopeSample s{};
    s.t = frames[k].t;
    s.int_div = int_div + allow_div;
    s.int_grad2 = int_grad2 + allow_grad2;
    s.xi_min = kInf;
    s.xi_max = 0.0;
    for (double th : p.theta) {
      const double xi = thermo::scaled_temperature(closure, th);
      s.xi_min = std::min(s.xi_min, xi);
      s.xi_max = std::max(s.xi_max, xi);
    }
    s.rho_min = *std::min_element(p.rho.begin(), p.rho.end());
    s.rho_max = *std::max_element(p.rho.begin(), p.rho.end());
    s.xi_lower = xi0_min * std::exp(-rep.b_sup * s.int_div);
    s.rho_lower = rho0_min * std::exp(-s.int_div);
    s.rho_upper = rho0_max * std::exp(s.int_div);
    s.xi_upper = xi0_max * (std::exp(rep.d_sup * rep.a_sup * s.int_grad2) +
                            std::exp(rep.b_sup * s.int_div));

    if (rep.contained) {
      std::string why;
      if (s.xi_min < s.xi_lower * (1.0 - rep.tol)) why = "Xi below lower envelope";
      else if (s.rho_min < s.rho_lower * (1.0 - rep.tol)) why = "rho below lower envelope";
      else if (s.rho_max > s.rho_upper * (1.0 + rep.tol)) why = "rho above upper envelope";
      else if (s.xi_max > s.xi_upper * (1.0 + rep.tol)) why = "Xi above upper envelope";
      if (!why.empty()) {
        rep.contained = false;
        rep.violation = why + " at t=" + fmt(s.t);
      }
    }
    rep.samples.push_back(s);
  }
  return rep;
}

double relative_entropy(const ThermoClosure& closure, const Grid1D& grid, const Primitives& prim,
                        const ReferenceFields& ref) {
  require_grid(grid, prim, "relative_entropy");
  const std::size_t n = grid.size();
  if (ref.r.size() != n || ref.theta.size() != n || ref.u.size() != n) {
    throw ArgumentError("relative_entropy: reference fields do not match the grid");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ref.r[i];
    const double big_theta = ref.theta[i];
    if (!(r > 0.0) || !(big_theta > 0.0)) {
      throw ArgumentError("relative_entropy: reference r and Theta must be positive (cell " +
                          std::to_string(i) + ")");
    }
    const double rho = prim.rho[i];
    const double du = prim.u[i] - ref.u[i];
    const thermo::BallisticEval h = thermo::ballistic_free_energy(closure, {rho, prim.theta[i]},
                                                                  big_theta);
    const thermo::BallisticEval h_ref =
        thermo::ballistic_free_energy(closure, {r, big_theta}, big_theta);
    acc += 0.5 * rho * du * du + (h.value - h_ref.d_drho * (rho - r) - h_ref.value);
  }
  return acc * grid.dx();
}

double relative_entropy_scale(const ThermoClosure& closure, const Grid1D& grid,
                              const Primitives& prim) {
  require_grid(grid, prim, "relative_entropy_scale");
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double rho = prim.rho[i];
    const double th = prim.theta[i];
    const thermo::EosEval ev = thermo::eos_eval(closure, {rho, th});
    acc += rho * (std::abs(ev.e) + th * std::abs(ev.s) + 0.5 * prim.u[i] * prim.u[i]);
  }
  return acc * grid.dx();
}

ReferenceFields trio_fields(const TestTrio& trio, const Grid1D& grid, double t) {
  ReferenceFields f;
  f.r.resize(grid.size());
  f.theta.resize(grid.size());
  f.u.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const TrioPoint p = trio(t, grid.x(i));
    f.r[i] = p.r;
    f.theta[i] = p.theta;
    f.u[i] = p.u;
  }
  return f;
}

namespace {

struct ReiIntegrands {
  double dissipation;
  double rhs;
};

ReiIntegrands rei_integrands(const ThermoClosure& closure, const Grid1D& grid, const Primitives& p,
                             const TestTrio& trio, double t) {
  const auto u_x = wall_gradient(grid, p.u, true);
  const auto th_x = wall_gradient(grid, p.theta, false);
  double diss = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double rho = p.rho[i], u = p.u[i], th = p.theta[i];
    const TrioPoint q = trio(t, grid.x(i));
    const thermo::EosEval ev = thermo::eos_eval(closure, {rho, th});
    const thermo::EosEval ref = thermo::eos_eval(closure, {q.r, q.theta});
    const thermo::Transport tr = thermo::transport(closure, th);

    const double stress = (4.0 / 3.0) * tr.mu * u_x[i];
    const double heat = -tr.kappa * th_x[i];
    diss += q.theta / th * (stress * u_x[i] - heat * th_x[i] / th);

    const double ds = ev.s - ref.s;
    const double p_t = ref.dp_drho * q.r_t + ref.dp_dtheta * q.theta_t;
    const double p_x = ref.dp_drho * q.r_x + ref.dp_dtheta * q.theta_x;
    rhs += rho * (q.u - u) * q.u_t + rho * (q.u - u) * u * q.u_x - ev.p * q.u_x  // momentum
           + stress * q.u_x                                                      // stress
           - rho * ds * q.theta_t - rho * ds * u * q.theta_x                     // entropy
           - heat / th * q.theta_x                                               // heat flux
           + (1.0 - rho / q.r) * p_t - rho / q.r * u * p_x;                      // pressure
  }
  return {diss * grid.dx(), rhs * grid.dx()};
}

}  // namespace

std::vector<ReiPoint> rei_series(const ThermoClosure& closure, const Grid1D& grid,
                                 const FrameSeries& frames, const TestTrio& trio) {
  require_frames(frames, "rei_residual");
  std::vector<double> times;
  for (const Frame& f : frames) times.push_back(f.t);
  trio.check_admissible(grid, times);

  std::vector<ReiPoint> out;
  double e0 = 0.0, diss = 0.0, rhs = 0.0, max_dt = 0.0;
  ReiIntegrands prev{};
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const Frame& f = frames[k];
    require_grid(grid, f.prim, "rei_residual");
    const double e = relative_entropy(closure, grid, f.prim, trio_fields(trio, grid, f.t));
    const ReiIntegrands cur = rei_integrands(closure, grid, f.prim, trio, f.t);
    if (k == 0) {
      e0 = e;
    } else {
      const double t0 = frames[k - 1].t;
      diss += trapezoid_step(t0, f.t, prev.dissipation, cur.dissipation);
      rhs += trapezoid_step(t0, f.t, prev.rhs, cur.rhs);
      max_dt = std::max(max_dt, f.t - t0);
    }
    prev = cur;
    const double residual = rhs - (e - e0 + diss);
    out.push_back({f.t, e, diss, rhs, residual,
                   rei_tolerance(grid.dx(), max_dt, f.t - frames.front().t)});
  }
  return out;
}

double rei_residual(const ThermoClosure& closure, const Grid1D& grid, const FrameSeries& frames,
                    const TestTrio& trio, double tau) {
  FrameSeries upto;
  for (const Frame& f : frames) {
    if (f.t <= tau * (1.0 + 1e-14) + 1e-300) upto.push_back(f);
  }
  if (upto.empty() || std::abs(upto.back().t - tau) > 1e-12 * std::max(1.0, tau)) {
    throw ArgumentError("rei_residual: tau=" + fmt(tau) + " is not a frame time");
  }
  return rei_series(closure, grid, upto, trio).back().residual;
}

std::vector<double> weak_strong_gap(const ThermoClosure& closure, const Grid1D& grid,
                                    const FrameSeries& a, const FrameSeries& b) {
  if (a.size() != b.size()) {
    throw ArgumentError("weak_strong_gap: trajectories have " + std::to_string(a.size()) +
                        " and " + std::to_string(b.size()) + " frames");
  }
  std::vector<double> gap(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a[k].t - b[k].t) > 1e-12 * std::max(1.0, std::abs(a[k].t))) {
      throw ArgumentError("weak_strong_gap: frame times differ at index " + std::to_string(k));
    }
    if (a[k].prim.size() != grid.size() || b[k].prim.size() != grid.size()) {
      throw ArgumentError("weak_strong_gap: grid mismatch at frame " + std::to_string(k));
    }
    const ReferenceFields ref{b[k].prim.rho, b[k].prim.theta, b[k].prim.u};
    gap[k] = relative_entropy(closure, grid, a[k].prim, ref);
  }
  return gap;
}

double frozen_gronwall_rate(std::string_view scenario) {
  // Fitted once from epsilon in {1e-2, 1e-3} perturbation runs (seed 7, N = 128,
  // output every 0.01) and frozen at twice the measured rate; scenarios whose gap
  // only decays get 0.5.
  static const std::map<std::string, double, std::less<>> rates = {
      {"rest", 0.5},
      {"acoustic-pulse", 0.5},
      {"heat-relaxation", 0.5},
      {"decaying-shear", 0.5},
      {"colliding-streams", 7.0},
      {"mms-smooth", 16.0},
  };
  const auto it = rates.find(scenario);
  if (it == rates.end()) throw ArgumentError("no frozen Gronwall rate for '" + std::string(scenario) + "'");
  return it->second;
}

GronwallCheck gronwall_check(std::string_view scenario, const std::vector<double>& times,
                             const std::vector<double>& gap) {
  if (times.size() != gap.size() || times.empty()) {
    throw ArgumentError("gronwall_check: need matching non-empty time and gap series");
  }
  if (!(gap.front() > 0.0)) {
    throw ArgumentError("gronwall_check: initial gap must be positive");
  }
  GronwallCheck g{};
  g.chi_hat = frozen_gronwall_rate(scenario);
  g.horizon = times.back() - times.front();
  g.bound = std::exp(g.chi_hat * g.horizon);
  g.max_ratio = 0.0;
  g.fitted_rate = -kInf;
  for (std::size_t k = 0; k < gap.size(); ++k) {
    const double ratio = gap[k] / gap.front();
    g.max_ratio = std::max(g.max_ratio, ratio);
    const double dt = times[k] - times.front();
    if (dt > 0.0) g.fitted_rate = std::max(g.fitted_rate, std::log(ratio) / dt);
  }
  if (gap.size() == 1) g.fitted_rate = 0.0;
  g.within = g.max_ratio <= g.bound;
  return g;
}

DiagnosticsReport build_report(const ThermoClosure& closure, const Grid1D& grid,
                               const FrameSeries& frames, const ReportOptions& options) {
  require_frames(frames, "build_report");
  DiagnosticsReport rep;
  ReportSummary& sum = rep.summary;
  sum.stop_reason = options.stop_reason;

  const EnvelopeReport env = comparison_envelopes(closure, grid, frames);
  std::optional<std::vector<ReiPoint>> rei;
  if (options.trio) rei = rei_series(closure, grid, frames, *options.trio);
  std::optional<std::vector<double>> gap;
  if (options.reference != nullptr) {
    gap = weak_strong_gap(closure, grid, frames, *options.reference);
  }

  const Conservation c0 = conservation(closure, grid, frames.front().prim);
  sum.mass_drift = 0.0;
  sum.energy_drift = 0.0;
  sum.sigma_min = kInf;
  sum.sigma_max = 0.0;
  sum.grad_u_max = 0.0;
  sum.monitor_exceeded = false;

  for (std::size_t k = 0; k < frames.size(); ++k) {
    const Frame& f = frames[k];
    const Conservation c = conservation(closure, grid, f.prim);
    const EntropyProduction ep = entropy_production(closure, grid, f.prim);
    const MonitorReport mon = regularity_monitor(grid, f.prim, options.g_threshold);
    const EnvelopeSample& es = env.samples[k];

    ReportRow row{};
    row.t = f.t;
    row.mass = c.mass;
    row.energy = c.energy;
    row.entropy = c.entropy;
    row.sigma_total = ep.total;
    row.sigma_min = ep.min;
    row.grad_u_inf = mon.grad_u_inf;
    row.div_u_inf = mon.div_u_inf;
    row.sobolev = mon.sobolev;
    row.xi_lower = es.xi_lower;
    row.rho_lower = es.rho_lower;
    row.rho_upper = es.rho_upper;
    row.xi_upper = es.xi_upper;
    if (gap) row.rel_entropy = (*gap)[k];
    if (rei) row.rei_residual = (*rei)[k].residual;
    row.stop_reason = k + 1 == frames.size() ? options.stop_reason : "";
    rep.rows.push_back(row);

    sum.mass_drift = std::max(
        sum.mass_drift, std::abs(c.mass - c0.mass - (f.injected[0] - frames.front().injected[0])) /
                            std::abs(c0.mass));
    sum.energy_drift = std::max(
        sum.energy_drift,
        std::abs(c.energy - c0.energy - (f.injected[2] - frames.front().injected[2])) /
            std::abs(c0.energy));
    sum.sigma_min = std::min(sum.sigma_min, ep.min);
    sum.sigma_max = std::max(sum.sigma_max, ep.max);
    if (k == 0) sum.grad_u_initial = mon.grad_u_inf;
    sum.grad_u_max = std::max(sum.grad_u_max, mon.grad_u_inf);
    sum.monitor_exceeded = sum.monitor_exceeded || mon.verdict == MonitorVerdict::Exceeded;
  }

  sum.conservation_ok = sum.mass_drift <= kConservationTol && sum.energy_drift <= kConservationTol;
  sum.sigma_nonnegative = sum.sigma_min >= -kSigmaRoundoff * sum.sigma_max;
  if (frames.size() >= 2) {
    sum.entropy = entropy_balance(closure, grid, frames, frames.front().t, frames.back().t);
  } else {
    sum.entropy = EntropyBalance{0.0, 0.0, 0.0, 0.0};
  }
  if (!options.forced) sum.entropy_inequality_ok = sum.entropy.residual >= -sum.entropy.tol_disc;
  sum.b_sup = env.b_sup;
  sum.b_inf = env.b_inf;
  sum.d_sup = env.d_sup;
  sum.a_sup = env.a_sup;
  sum.envelope_tol = env.tol;
  sum.envelopes_contained = env.contained;
  sum.envelope_violation = env.violation;

  if (rei) {
    double margin = kInf;
    for (const ReiPoint& p : *rei) margin = std::min(margin, p.residual + p.tol_disc);
    sum.rei_min_margin = margin;
    sum.rei_tol_disc = rei->back().tol_disc;
    if (!options.forced) sum.rei_ok = margin >= 0.0;
  }
  if (gap) {
    sum.gap_max = *std::max_element(gap->begin(), gap->end());
    if (gap->front() > 0.0) {
      std::vector<double> times;
      for (const Frame& f : frames) times.push_back(f.t);
      sum.gronwall = gronwall_check(options.scenario, times, *gap);
    }
  }
  return rep;
}

}  // namespace nsf::diagnostics
