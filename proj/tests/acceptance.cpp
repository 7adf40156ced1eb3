// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "nsf/commands.hpp"
#include "nsf/config.hpp"
#include "nsf/diagnostics.hpp"
#include "nsf/scenarios.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace nsf;
using nsf::testing::loglog_slope;
using nsf::testing::richardson_derivative;
using nsf::testing::SplitMix;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

const fs::path& scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("nsf_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

config::RunConfig make_config(const std::string& scenario, std::size_t n,
                              const std::vector<std::string>& overrides = {}) {
  nlohmann::json doc = {{"scenario", scenario}, {"N", n}};
  return config::parse_config_json(doc, overrides);
}

struct StoredRun {
  fs::path dir;
  commands::RunOutcome outcome;
  double seconds;
};

StoredRun run_to(const config::RunConfig& cfg, const std::string& name) {
  const auto start = std::chrono::steady_clock::now();
  const fs::path dir = scratch() / name;
  StoredRun r{dir, commands::run(cfg, dir), 0.0};
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

/// Preset runs of every scenario at N = 256, shared by several criteria.
const std::map<std::string, StoredRun>& preset_runs() {
  static const std::map<std::string, StoredRun> runs = [] {
    std::map<std::string, StoredRun> m;
    for (const auto& s : scenarios::list()) m.emplace(s.id, run_to(make_config(s.id, 256), "preset-" + s.id));
    return m;
  }();
  return runs;
}

std::vector<thermo::ThermoClosure> closures() {
  return {thermo::make_ideal_gas_radiative({}), thermo::build_compliant_closure({})};
}

const char* closure_name(const thermo::ThermoClosure& c) {
  return c.kind() == thermo::ClosureKind::IdealGasRadiative ? "ideal" : "compliant";
}

// ------------------------------------------------------------------ criteria

Verdict gibbs_consistency() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const auto& c : closures()) {
    SplitMix rng(2024);
    for (int k = 0; k < 1000; ++k) {
      const double rho = rng.log_uniform(1e-2, 10.0);
      const double th = rng.log_uniform(1e-1, 10.0);
      auto e_at = [&](double r, double t) { return thermo::eos_eval(c, {r, t}).e; };
      auto s_at = [&](double r, double t) { return thermo::eos_eval(c, {r, t}).s; };
      const double ht = 1e-3 * th, hr = 1e-3 * rho;
      const double de_dt = richardson_derivative([&](double t) { return e_at(rho, t); }, th, ht);
      const double ds_dt = richardson_derivative([&](double t) { return s_at(rho, t); }, th, ht);
      const double de_dr = richardson_derivative([&](double r) { return e_at(r, th); }, rho, hr);
      const double ds_dr = richardson_derivative([&](double r) { return s_at(r, th); }, rho, hr);
      const thermo::EosEval ev = thermo::eos_eval(c, {rho, th});
      // Relative to the size of the differenced functions, which sets the roundoff floor.
      const double magnitude = std::abs(ev.e) + th * std::abs(ev.s);
      const double r_theta = std::abs(th * ds_dt - de_dt) / (std::abs(de_dt) + magnitude / th);
      const double r_rho = std::abs(th * ds_dr - (de_dr - ev.p / (rho * rho))) /
                           (std::abs(de_dr) + ev.p / (rho * rho) + magnitude / rho);
      worst = std::max({worst, r_theta, r_rho});
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst < 1e-8 && secs < 5.0,
          "max relative residual " + sci(worst) + " (limit 1e-8), " + sci(secs) + " s (limit 5)"};
}

Verdict hypothesis_certification() {
  const thermo::ThermoClosure c = thermo::build_compliant_closure({});
  const thermo::CertificationReport r = thermo::certify(c, 1e-6, 1e6, 1000);
  std::string detail = std::to_string(r.samples) + " samples, ratio in [" + sci(r.ratio_inf) +
                       ", " + sci(r.ratio_sup) + "], limit " + sci(r.limit_estimate) +
                       ", S(Z_max) " + sci(r.entropy_at_zmax);
  if (!r.passed()) detail += "; first failure: " + r.first_failure + " at Z=" + sci(r.first_failure_z);
  return {r.passed() && r.entropy_at_zmax < 1e-6, detail};
}

Verdict exact_conservation() {
  bool ok = true;
  double worst = 0.0, slowest = 0.0;
  for (const auto& [id, run] : preset_runs()) {
    const auto& s = run.outcome.report.summary;
    worst = std::max({worst, s.mass_drift, s.energy_drift});
    slowest = std::max(slowest, run.seconds);
    ok = ok && s.mass_drift <= 1e-11 && s.energy_drift <= 1e-11 && run.seconds < 60.0;
  }
  return {ok, std::to_string(preset_runs().size()) + " scenarios at N=256, max drift " + sci(worst) +
                  " (limit 1e-11), slowest " + sci(slowest) + " s (limit 60)"};
}

Verdict mms_order() {
  bool ok = true;
  std::string detail;
  for (const char* kind : {"ideal-gas-radiative", "hard-sphere-compliant"}) {
    const auto cfg = make_config("mms-smooth", 64, {std::string("closure.kind=") + kind});
    const double order = commands::min_order(commands::mms_convergence(cfg, {64, 128, 256}));
    ok = ok && order >= 1.7;
    detail += std::string(detail.empty() ? "" : ", ") + kind + " min order " + sci(order);
  }
  return {ok, detail + " (limit 1.7)"};
}

Verdict entropy_production_sign() {
  bool ok = true;
  double worst_sigma = 0.0;
  for (const auto& [id, run] : preset_runs()) {
    const auto& s = run.outcome.report.summary;
    ok = ok && s.sigma_nonnegative;
    if (s.sigma_max > 0.0) worst_sigma = std::min(worst_sigma, s.sigma_min / s.sigma_max);
    if (s.entropy_inequality_ok) ok = ok && *s.entropy_inequality_ok;
  }
  // Refinement with output spacing proportional to dx.
  double worst_tol_ratio = 0.0, worst_margin = HUGE_VAL;
  for (const char* id : {"acoustic-pulse", "heat-relaxation", "decaying-shear"}) {
    std::vector<diagnostics::EntropyBalance> b;
    for (std::size_t n : {128u, 256u}) {
      const auto cfg = make_config(id, n, {"time.output_dt=" + std::to_string(3.2 / n)});
      b.push_back(run_to(cfg, "entropy-" + std::string(id) + "-" + std::to_string(n))
                      .outcome.report.summary.entropy);
    }
    for (const auto& e : b) {
      ok = ok && e.residual >= -e.tol_disc;
      worst_margin = std::min(worst_margin, e.residual / e.tol_disc);
    }
    const double ratio = b[1].tol_disc / b[0].tol_disc;
    worst_tol_ratio = std::max(worst_tol_ratio, ratio);
    ok = ok && ratio <= 0.5 * (1.0 + 1e-12);
  }
  return {ok, "min sigma/max sigma " + sci(worst_sigma) + " (limit -1e-12), min residual/tol_disc " +
                  sci(worst_margin) + " (limit -1)" + ", tol_disc refinement ratio " + sci(worst_tol_ratio) +
                  " (limit 0.5)"};
}

Verdict relative_entropy_functional() {
  bool ok = true;
  double worst_self = 0.0;
  std::string slopes;
  const double pi = std::numbers::pi;
  for (const auto& c : closures()) {
    const solver::Grid1D g(128, 1.0);
    std::vector<double> rho(128), u(128), th(128);
    for (std::size_t i = 0; i < 128; ++i) {
      const double x = g.x(i);
      rho[i] = 1.0 + 0.3 * std::cos(pi * x);
      u[i] = 0.4 * std::sin(2.0 * pi * x);
      th[i] = 1.5 + 0.4 * std::sin(pi * x);
    }
    const auto prim = solver::primitives_from_fields(c, rho, u, th);
    const double scale = diagnostics::relative_entropy_scale(c, g, prim);
    const double self = diagnostics::relative_entropy(c, g, prim, {rho, th, u});
    worst_self = std::max(worst_self, std::abs(self) / scale);
    ok = ok && std::abs(self) <= 1e-12 * scale;

    std::vector<double> eps{1e-2, 1e-3, 1e-4}, values;
    for (double e : eps) {
      diagnostics::ReferenceFields ref{rho, th, u};
      for (std::size_t i = 0; i < 128; ++i) {
        const double x = g.x(i);
        ref.r[i] *= 1.0 + e * std::cos(3.0 * pi * x);
        ref.theta[i] *= 1.0 + e * std::cos(2.0 * pi * x);
        ref.u[i] += e * std::sin(pi * x);
      }
      values.push_back(diagnostics::relative_entropy(c, g, prim, ref));
    }
    const double slope = loglog_slope(eps, values);
    ok = ok && std::abs(slope - 2.0) <= 0.1;
    slopes += std::string(slopes.empty() ? "" : ", ") + closure_name(c) + " " + sci(slope);
  }
  return {ok, "self value/scale " + sci(worst_self) + " (limit 1e-12), fitted exponents " + slopes +
                  " (2.0 +- 0.1)"};
}

Verdict relative_entropy_inequality() {
  bool ok = true;
  double worst_residual = HUGE_VAL, worst_ratio = 0.0;
  const std::pair<const char*, const char*> pairs[] = {
      {"rest", "constant"}, {"acoustic-pulse", "pulse"}, {"heat-relaxation", "thermal"}};
  for (const char* kind : {"ideal-gas-radiative", "hard-sphere-compliant"}) {
    for (const auto& [scenario, trio] : pairs) {
      std::vector<diagnostics::DiagnosticsReport> s;
      for (std::size_t n : {128u, 256u}) {
        const auto cfg = make_config(scenario, n,
                                     {std::string("closure.kind=") + kind,
                                      std::string("diagnostics.trio=") + trio,
                                      "time.output_dt=" + std::to_string(3.2 / n)});
        s.push_back(run_to(cfg, std::string("rei-") + kind + "-" + scenario + "-" + std::to_string(n))
                        .outcome.report);
      }
      for (const auto& r : s) {
        // The verdict covers every frame; the detail reports the final one.
        ok = ok && r.summary.rei_ok && *r.summary.rei_ok;
        worst_residual =
            std::min(worst_residual, *r.rows.back().rei_residual / *r.summary.rei_tol_disc);
      }
      const double ratio = *s[1].summary.rei_tol_disc / *s[0].summary.rei_tol_disc;
      worst_ratio = std::max(worst_ratio, ratio);
      ok = ok && ratio <= 0.6;
    }
  }
  return {ok, "3 pairs x 2 closures at N=128,256, min residual/tol_disc " + sci(worst_residual) +
                  " (limit -1)" +
                  ", tol_disc ratio " + sci(worst_ratio) + " (limit 0.6)"};
}

Verdict comparison_envelopes() {
  bool ok = true;
  std::string detail;
  for (const char* id : {"rest", "acoustic-pulse", "heat-relaxation"}) {
    const auto& s = preset_runs().at(id).outcome.report.summary;
    ok = ok && s.envelopes_contained;
    detail += std::string(detail.empty() ? "" : ", ") + id + (s.envelopes_contained ? " contained" : " " + s.envelope_violation);
  }
  return {ok, detail + " (tol 5 dx^2)"};
}

Verdict weak_strong_gap() {
  bool ok = true;
  // Identical configs: the stored runs must coincide exactly.
  const auto base = make_config("acoustic-pulse", 128);
  const StoredRun first = run_to(base, "gap-first");
  auto twin = base;
  twin.reference_run = first.dir.string();
  const StoredRun second = run_to(twin, "gap-second");
  const double identical = *second.outcome.report.summary.gap_max;
  ok = ok && identical <= 1e-12;
  std::string detail = "identical-run gap " + sci(identical) + " (limit 1e-12)";

  double worst = 0.0;
  for (const auto& s : scenarios::list()) {
    const StoredRun ref = run_to(make_config(s.id, 128), "gap-ref-" + s.id);
    auto cfg = make_config(s.id, 128, {"perturbation.epsilon=0.001", "perturbation.seed=7"});
    cfg.reference_run = ref.dir.string();
    const auto& g = run_to(cfg, "gap-pert-" + s.id).outcome.report.summary.gronwall;
    if (!g) {
      ok = false;
      detail += "; " + s.id + " has no Gronwall check";
      continue;
    }
    ok = ok && g->within;
    worst = std::max(worst, std::log(g->max_ratio) / std::log(g->bound));
  }
  return {ok, detail + "; perturbed runs, max log(ratio)/log(bound) " + sci(worst) + " (limit 1)"};
}

Verdict regularity_monitor() {
  const auto& streams = preset_runs().at("colliding-streams").outcome;
  const auto& pulse = preset_runs().at("acoustic-pulse").outcome;
  const auto& s = streams.report.summary;
  const double growth = s.grad_u_max / s.grad_u_initial;
  const bool ok = streams.exit_code == commands::kExitBlowUp &&
                  streams.result.stop_reason == solver::StopReason::RegularityMonitor &&
                  growth >= 10.0 && pulse.result.stop_reason == solver::StopReason::Completed &&
                  !pulse.report.summary.monitor_exceeded;
  return {ok, "colliding-streams exit " + std::to_string(streams.exit_code) + " at t=" +
                  sci(streams.result.stop_time) + ", growth " + sci(growth) +
                  "x (limit 10); acoustic-pulse " +
                  std::string(solver::to_string(pulse.result.stop_reason)) + ", max grad " +
                  sci(pulse.report.summary.grad_u_max)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"Gibbs consistency", gibbs_consistency},
      {"hypothesis certification", hypothesis_certification},
      {"exact conservation", exact_conservation},
      {"MMS order", mms_order},
      {"entropy production sign", entropy_production_sign},
      {"relative entropy functional", relative_entropy_functional},
      {"relative entropy inequality", relative_entropy_inequality},
      {"comparison envelopes", comparison_envelopes},
      {"weak-strong gap", weak_strong_gap},
      {"regularity monitor", regularity_monitor},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::printf("%s %2zu %-28s %s\n", v.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                v.detail.c_str());
    std::fflush(stdout);
  }
  std::error_code ec;
  fs::remove_all(scratch(), ec);
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
