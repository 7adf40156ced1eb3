#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "nsf/diagnostics.hpp"
#include "nsf/scenarios.hpp"
#include "oracles.hpp"

using namespace nsf;
using namespace nsf::diagnostics;
using nsf::testing::SplitMix;

namespace {

constexpr double kPi = std::numbers::pi;

thermo::ThermoClosure ideal(double a = 0.1, double mu0 = 1e-2, double kappa0 = 1e-2) {
  thermo::ClosureParams p;
  p.a = a;
  p.mu0 = mu0;
  p.kappa0 = kappa0;
  return thermo::make_ideal_gas_radiative(p);
}

Primitives fields(const ThermoClosure& c, std::vector<double> rho, std::vector<double> u,
                  std::vector<double> theta) {
  return solver::primitives_from_fields(c, std::move(rho), std::move(u), std::move(theta));
}

Primitives uniform(const ThermoClosure& c, std::size_t n, double rho, double theta) {
  return fields(c, std::vector<double>(n, rho), std::vector<double>(n, 0.0),
                std::vector<double>(n, theta));
}

FrameSeries run_frames(const ThermoClosure& c, const char* id, std::size_t n, double t_end,
                       double output_dt) {
  const Grid1D g(n, 1.0);
  const auto f = scenarios::initial_fields(id, g);
  solver::RunSettings rs;
  rs.t_end = t_end;
  rs.output_dt = output_dt;
  const auto res = solver::run(c, g, solver::state_from_primitives(c, f.rho, f.u, f.theta), rs);
  return frames_from_trajectory(res.trajectory);
}

}  // namespace

TEST_CASE("uniform state totals") {
  const auto c = ideal(0.1);
  const Grid1D g(40, 1.0);
  const Conservation unit = conservation(c, g, uniform(c, 40, 1.0, 1.0));
  CHECK(unit.mass == doctest::Approx(1.0).epsilon(1e-14));
  // e = (3/2) theta + a theta^4 / rho for the ideal gas with radiation.
  const Conservation rest = conservation(c, g, uniform(c, 40, 2.0, 1.5));
  CHECK(rest.energy == doctest::Approx(1.5 * 2.0 * 1.5 + 0.1 * std::pow(1.5, 4)).epsilon(1e-14));
}

TEST_CASE("entropy production of a sine shear") {
  // mu = mu0 (1 + theta) = 2 at theta = 1, so sigma peaks at (4/3) 2 (2 pi)^2.
  const auto c = ideal(0.1, 1.0, 1e-2);
  const std::size_t n = 1024;
  const Grid1D g(n, 1.0);
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = std::sin(2.0 * kPi * g.x(i));
  const auto prod = entropy_production(c, g, fields(c, std::vector<double>(n, 1.0), u,
                                                    std::vector<double>(n, 1.0)));
  const double peak = (8.0 / 3.0) * std::pow(2.0 * kPi, 2);
  CHECK(prod.max == doctest::Approx(peak).epsilon(1e-4));
  CHECK(prod.min >= 0.0);
  // Integral of (8/3)(2 pi)^2 cos^2 over the slab.
  CHECK(prod.total == doctest::Approx(0.5 * peak).epsilon(1e-4));
}

TEST_CASE("entropy production is nonnegative on random states") {
  const auto c = ideal();
  const Grid1D g(64, 1.0);
  SplitMix rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> rho(64), u(64), th(64);
    for (std::size_t i = 0; i < 64; ++i) {
      rho[i] = rng.log_uniform(1e-2, 1e2);
      u[i] = rng.uniform(-5.0, 5.0);
      th[i] = rng.log_uniform(1e-2, 1e2);
    }
    const auto prod = entropy_production(c, g, fields(c, rho, u, th));
    CHECK(prod.min >= 0.0);
    CHECK(prod.total >= 0.0);
  }
}

TEST_CASE("regularity monitor") {
  const auto c = ideal();
  const std::size_t n = 512;
  const Grid1D g(n, 1.0);
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = std::sin(2.0 * kPi * g.x(i));
  const Primitives p = fields(c, std::vector<double>(n, 1.0), u, std::vector<double>(n, 1.0));
  const MonitorReport r = regularity_monitor(g, p, 10.0);
  CHECK(r.grad_u_inf == doctest::Approx(2.0 * kPi).epsilon(1e-4));
  CHECK(r.verdict == MonitorVerdict::Within);
  CHECK(regularity_monitor(g, p, 6.0).verdict == MonitorVerdict::Exceeded);

  SUBCASE("verdict is monotone in the threshold") {
    bool seen_within = false;
    for (double thr = 0.0; thr < 20.0; thr += 0.25) {
      const bool within = regularity_monitor(g, p, thr).verdict == MonitorVerdict::Within;
      if (seen_within) CHECK(within);
      seen_within = seen_within || within;
    }
    CHECK(seen_within);
  }
  SUBCASE("Sobolev norms of a uniform state reduce to the L2 part") {
    const auto norms = sobolev_norms(g, uniform(c, n, 1.3, 0.7));
    for (double v : norms) CHECK(v == doctest::Approx(std::hypot(1.3, 0.7)).epsilon(1e-14));
  }
  SUBCASE("Sobolev norms of the sine shear") {
    // ||rho||^2 = ||theta||^2 = 1, ||u||^2 = 1/2, ||d^j u||^2 = k^(2j) / 2.
    const auto norms = sobolev_norms(g, p);
    const double k = 2.0 * kPi;
    const double l2 = 2.5;
    CHECK(norms[0] == doctest::Approx(std::sqrt(l2 + 0.5 * k * k)).epsilon(1e-3));
    CHECK(norms[1] == doctest::Approx(std::sqrt(l2 + 0.5 * k * k + 0.5 * std::pow(k, 4))).epsilon(1e-2));
    CHECK(norms[2] > norms[1]);
  }
}

TEST_CASE("one-sided derivative is exact on quadratics") {
  const Grid1D g(16, 1.0);
  std::vector<double> f(16);
  for (std::size_t i = 0; i < 16; ++i) f[i] = 3.0 * g.x(i) * g.x(i) - g.x(i) + 2.0;
  const auto d = one_sided_derivative(g, f);
  for (std::size_t i = 0; i < 16; ++i) CHECK(d[i] == doctest::Approx(6.0 * g.x(i) - 1.0).epsilon(1e-12));
}

TEST_CASE("envelopes on a velocity-free trajectory") {
  const auto c = ideal();
  const Grid1D g(32, 1.0);
  std::vector<double> rho(32), th(32);
  for (std::size_t i = 0; i < 32; ++i) {
    rho[i] = 1.0 + 0.2 * std::cos(kPi * g.x(i));
    th[i] = 1.0 + 0.3 * std::cos(kPi * g.x(i));
  }
  FrameSeries frames;
  for (double t : {0.0, 0.1, 0.2}) {
    // Temperature relaxes toward its mean while density stays fixed.
    std::vector<double> th_t(32);
    for (std::size_t i = 0; i < 32; ++i) th_t[i] = 1.0 + (th[i] - 1.0) * std::exp(-t);
    frames.push_back({t, fields(c, rho, std::vector<double>(32, 0.0), th_t), {}});
  }
  const EnvelopeReport rep = comparison_envelopes(c, g, frames);
  CHECK(rep.contained);
  const auto& s0 = rep.samples.front();
  for (const EnvelopeSample& s : rep.samples) {
    CHECK(s.int_div == 0.0);
    CHECK(s.int_grad2 == 0.0);
    CHECK(s.rho_lower == s0.rho_min);
    CHECK(s.rho_upper == s0.rho_max);
    CHECK(s.xi_lower == s0.xi_min);
    CHECK(s.xi_upper == 2.0 * s0.xi_max);
  }
  CHECK(rep.b_inf > 0.0);
  CHECK(rep.b_inf <= rep.b_sup);

  SUBCASE("density growth without flow violates the envelope") {
    std::vector<double> grown(rho);
    for (double& r : grown) r *= 1.1;
    frames.push_back({0.3, fields(c, grown, std::vector<double>(32, 0.0), th), {}});
    const EnvelopeReport bad = comparison_envelopes(c, g, frames);
    CHECK_FALSE(bad.contained);
    CHECK(bad.violation.find("rho above upper envelope") != std::string::npos);
  }
}

TEST_CASE("relative entropy") {
  const auto c = ideal();
  const Grid1D g(64, 1.0);
  std::vector<double> rho(64), u(64), th(64), dr(64), du(64), dth(64);
  for (std::size_t i = 0; i < 64; ++i) {
    const double x = g.x(i);
    rho[i] = 1.0 + 0.3 * std::cos(kPi * x);
    u[i] = 0.5 * std::sin(2.0 * kPi * x);
    th[i] = 1.2 + 0.2 * std::sin(kPi * x);
    dr[i] = std::cos(3.0 * kPi * x);
    du[i] = std::sin(kPi * x);
    dth[i] = std::cos(2.0 * kPi * x);
  }
  const Primitives p = fields(c, rho, u, th);
  const ReferenceFields self{rho, th, u};

  SUBCASE("vanishes against itself") {
    CHECK(std::abs(relative_entropy(c, g, p, self)) <= 1e-14 * relative_entropy_scale(c, g, p));
  }
  SUBCASE("scales quadratically in the perturbation") {
    std::vector<double> ratio;
    for (double eps : {1e-2, 5e-3, 2.5e-3}) {
      ReferenceFields ref{rho, th, u};
      for (std::size_t i = 0; i < 64; ++i) {
        ref.r[i] += eps * dr[i];
        ref.theta[i] += eps * dth[i];
        ref.u[i] += eps * du[i];
      }
      ratio.push_back(relative_entropy(c, g, p, ref) / (eps * eps));
    }
    CHECK(ratio[0] > 0.0);
    CHECK(ratio[2] == doctest::Approx(ratio[1]).epsilon(5e-3));
    CHECK(ratio[1] == doctest::Approx(ratio[0]).epsilon(1e-2));
  }
  SUBCASE("nonnegative on random pairs") {
    SplitMix rng(17);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> a(64), b(64), w(64), r(64), t(64), v(64);
      for (std::size_t i = 0; i < 64; ++i) {
        a[i] = rng.log_uniform(1e-2, 1e2);
        b[i] = rng.uniform(-3.0, 3.0);
        w[i] = rng.log_uniform(1e-2, 1e2);
        r[i] = rng.log_uniform(1e-2, 1e2);
        v[i] = rng.uniform(-3.0, 3.0);
        t[i] = rng.log_uniform(1e-2, 1e2);
      }
      const Primitives q = fields(c, a, b, w);
      CHECK(relative_entropy(c, g, q, {r, t, v}) >= -1e-13 * relative_entropy_scale(c, g, q));
    }
  }
  SUBCASE("rejects mismatched or nonpositive references") {
    CHECK_THROWS_AS(relative_entropy(c, g, p, {std::vector<double>(10, 1.0), th, u}), ArgumentError);
    std::vector<double> bad(th);
    bad[3] = 0.0;
    CHECK_THROWS_AS(relative_entropy(c, g, p, {rho, bad, u}), ArgumentError);
  }
}

TEST_CASE("test trios") {
  const Grid1D g(32, 1.0);
  for (const TrioInfo& info : list_trios()) {
    const TestTrio trio = make_trio(info.id, 1.0);
    CHECK_NOTHROW(trio.check_admissible(g, {0.0, 0.25, 0.5}));
    // Derivatives agree with finite differences of the fields.
    for (double t : {0.1, 0.4}) {
      for (double x : {0.2, 0.55}) {
        const TrioPoint q = trio(t, x);
        using nsf::testing::richardson_derivative;
        CHECK(q.r_t == doctest::Approx(richardson_derivative([&](double s) { return trio(s, x).r; }, t, 1e-3)).epsilon(1e-8));
        CHECK(q.theta_t == doctest::Approx(richardson_derivative([&](double s) { return trio(s, x).theta; }, t, 1e-3)).epsilon(1e-8));
        CHECK(q.u_t == doctest::Approx(richardson_derivative([&](double s) { return trio(s, x).u; }, t, 1e-3)).epsilon(1e-8));
        CHECK(q.r_x == doctest::Approx(richardson_derivative([&](double y) { return trio(t, y).r; }, x, 1e-3)).epsilon(1e-8));
        CHECK(q.theta_x == doctest::Approx(richardson_derivative([&](double y) { return trio(t, y).theta; }, x, 1e-3)).epsilon(1e-8));
        CHECK(q.u_x == doctest::Approx(richardson_derivative([&](double y) { return trio(t, y).u; }, x, 1e-3)).epsilon(1e-8));
      }
    }
  }
  CHECK_THROWS_AS(make_trio("nope", 1.0), ArgumentError);

  const TestTrio sliding("sliding", 1.0, [](double, double) {
    return TrioPoint{1.0, 1.0, 0.1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  });
  try {
    sliding.check_admissible(g, {0.0});
    FAIL("expected ArgumentError");
  } catch (const ArgumentError& e) {
    CHECK(std::string(e.what()).find("U = 0 at the wall") != std::string::npos);
  }
  const TestTrio cold("cold", 1.0, [](double, double x) {
    return TrioPoint{1.0, x - 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0};
  });
  CHECK_THROWS_AS(cold.check_admissible(g, {0.0}), ArgumentError);
}

TEST_CASE("relative entropy inequality on a rest run") {
  const auto c = ideal();
  const Grid1D g(32, 1.0);
  const FrameSeries frames = run_frames(c, "rest", 32, 0.1, 0.02);
  const auto series = rei_series(c, g, frames, make_trio("constant", 1.0));
  REQUIRE(series.size() == frames.size());
  for (const ReiPoint& p : series) {
    CHECK(std::abs(p.rel_entropy) <= 1e-13);
    CHECK(std::abs(p.residual) <= 1e-13);
    CHECK(p.dissipation == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
  }
  CHECK(rei_residual(c, g, frames, make_trio("constant", 1.0), 0.04) ==
        doctest::Approx(series[2].residual));
  CHECK_THROWS_AS(rei_residual(c, g, frames, make_trio("constant", 1.0), 0.05), ArgumentError);
}

TEST_CASE("entropy balance on a heat relaxation run") {
  const auto c = ideal();
  const Grid1D g(64, 1.0);
  const FrameSeries frames = run_frames(c, "heat-relaxation", 64, 0.2, 0.005);
  const EntropyBalance b = entropy_balance(c, g, frames, 0.0, 0.2);
  CHECK(b.delta_entropy > 0.0);
  CHECK(b.production > 0.0);
  CHECK(b.residual == doctest::Approx(b.delta_entropy - b.production));
  CHECK(b.residual >= -b.tol_disc);
  // The excess is numerical dissipation and falls at second order.
  const Grid1D g2(128, 1.0);
  const EntropyBalance fine =
      entropy_balance(c, g2, run_frames(c, "heat-relaxation", 128, 0.2, 0.005), 0.0, 0.2);
  CHECK(b.residual > 0.0);
  CHECK(std::log2(b.residual / fine.residual) >= 1.7);
  CHECK(b.tol_disc == doctest::Approx(entropy_tolerance(g.dx(), 0.005, 0.2)));
  CHECK(max_frame_spacing(frames) == doctest::Approx(0.005));
  CHECK_THROWS_AS(entropy_balance(c, g, frames, 0.2, 0.3), ArgumentError);
}

TEST_CASE("weak-strong gap") {
  const auto c = ideal();
  const Grid1D g(32, 1.0);
  const FrameSeries a = run_frames(c, "acoustic-pulse", 32, 0.1, 0.02);
  for (double v : weak_strong_gap(c, g, a, a)) CHECK(v == 0.0);

  const FrameSeries coarse = run_frames(c, "acoustic-pulse", 16, 0.1, 0.02);
  CHECK_THROWS_AS(weak_strong_gap(c, g, a, coarse), ArgumentError);
  FrameSeries shorter(a.begin(), a.end() - 1);
  CHECK_THROWS_AS(weak_strong_gap(c, g, a, shorter), ArgumentError);
}

TEST_CASE("Gronwall check") {
  const std::vector<double> times{0.0, 0.5, 1.0};
  const GronwallCheck ok = gronwall_check("rest", times, {1e-6, 1.1e-6, 1.2e-6});
  CHECK(ok.chi_hat == frozen_gronwall_rate("rest"));
  CHECK(ok.horizon == 1.0);
  CHECK(ok.bound == doctest::Approx(std::exp(ok.chi_hat)));
  CHECK(ok.max_ratio == doctest::Approx(1.2));
  CHECK(ok.within);
  const GronwallCheck bad = gronwall_check("rest", times, {1e-6, 1e-6, 3e-6});
  CHECK_FALSE(bad.within);
  CHECK(bad.fitted_rate == doctest::Approx(std::log(3.0)));
  CHECK_THROWS_AS(gronwall_check("rest", times, {0.0, 1.0, 1.0}), ArgumentError);
  CHECK_THROWS_AS(frozen_gronwall_rate("unknown"), ArgumentError);
}

TEST_CASE("report rows track frames") {
  const auto c = ideal();
  const Grid1D g(32, 1.0);
  const FrameSeries frames = run_frames(c, "acoustic-pulse", 32, 0.1, 0.02);
  ReportOptions opt;
  opt.scenario = "acoustic-pulse";
  opt.trio = make_trio("pulse", 1.0);
  const DiagnosticsReport rep = build_report(c, g, frames, opt);
  REQUIRE(rep.rows.size() == frames.size());
  CHECK(rep.rows.back().stop_reason == "completed");
  CHECK(rep.rows.front().stop_reason.empty());
  CHECK(rep.summary.conservation_ok);
  CHECK(rep.summary.sigma_nonnegative);
  REQUIRE(rep.summary.entropy_inequality_ok);
  CHECK(*rep.summary.entropy_inequality_ok);
  REQUIRE(rep.summary.rei_ok);
  CHECK(*rep.summary.rei_ok);
  CHECK(rep.summary.envelopes_contained);
  CHECK_FALSE(rep.summary.gronwall);
  for (const ReportRow& r : rep.rows) {
    CHECK(r.rei_residual);
    CHECK_FALSE(r.rel_entropy);  // filled only against a reference run
  }

  opt.forced = true;
  const DiagnosticsReport forced = build_report(c, g, frames, opt);
  CHECK_FALSE(forced.summary.entropy_inequality_ok);
  CHECK_FALSE(forced.summary.rei_ok);
}

TEST_CASE("initial gap of perturbed data scales as epsilon squared") {
  const auto c = ideal();
  const Grid1D g(64, 1.0);
  auto frame0 = [&](double eps) {
    const auto f = scenarios::initial_fields("acoustic-pulse", g, {eps, 3});
    return FrameSeries{{0.0, fields(c, f.rho, f.u, f.theta), {}}};
  };
  const FrameSeries base = frame0(0.0);
  std::vector<double> eps{1e-2, 1e-3, 1e-4}, gap0;
  for (double e : eps) gap0.push_back(weak_strong_gap(c, g, frame0(e), base).front());
  CHECK(nsf::testing::loglog_slope(eps, gap0) == doctest::Approx(2.0).epsilon(0.02));
}
