#include "nsf/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "compliant_interpolant.hpp"

namespace nsf::thermo {
namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be positive and finite, got " + std::to_string(v));
  }
}

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be nonnegative and finite, got " +
                      std::to_string(v));
  }
}

constexpr int kNewtonIterations = 50;
constexpr int kBisectionIterations = 400;

}  // namespace

std::string_view to_string(ClosureKind kind) {
  switch (kind) {
    case ClosureKind::IdealGasRadiative:
      return "ideal-gas-radiative";
    case ClosureKind::HardSphereCompliant:
      return "hard-sphere-compliant";
  }
  return "unknown";
}

ClosureKind closure_kind_from_string(std::string_view name) {
  if (name == "ideal-gas-radiative") return ClosureKind::IdealGasRadiative;
  if (name == "hard-sphere-compliant") return ClosureKind::HardSphereCompliant;
  throw ArgumentError("unknown closure kind '" + std::string(name) +
                      "' (known: ideal-gas-radiative, hard-sphere-compliant)");
}

ThermoClosure::ThermoClosure(ClosureParams params,
                             std::shared_ptr<const CompliantInterpolant> table)
    : params_(params), table_(std::move(table)) {
  require_nonnegative(params_.a, "a");
  require_positive(params_.mu0, "mu0");
  require_positive(params_.kappa0, "kappa0");
  if (!(params_.lambda > 0.4 && params_.lambda <= 1.0)) {
    throw DomainError("Lambda must lie in (2/5, 1], got " + std::to_string(params_.lambda));
  }
  if ((params_.kind == ClosureKind::HardSphereCompliant) != (table_ != nullptr)) {
    throw ArgumentError("compliant closures need a table; the ideal gas takes none");
  }
}

double ThermoClosure::z_min() const noexcept { return table_ ? table_->z_min() : 0.0; }

double ThermoClosure::z_max() const noexcept {
  return table_ ? table_->z_max() : std::numeric_limits<double>::infinity();
}

ThermoClosure make_ideal_gas_radiative(const ClosureParams& params) {
  ClosureParams p = params;
  p.kind = ClosureKind::IdealGasRadiative;
  return ThermoClosure(p, nullptr);
}

StructuralEval structural(const ThermoClosure& closure, double z) {
  require_positive(z, "Z");
  if (const auto* table = closure.table()) return table->eval(z);
  // P(Z) = Z, S(Z) = -ln Z (normalized by S(1) = 0).
  return StructuralEval{1.0, 1.0, -std::log(z), -1.0, 2.0 / 3.0};
}

EosEval eos_eval(const ThermoClosure& closure, ThermoState state) {
  require_positive(state.rho, "rho");
  require_positive(state.theta, "theta");
  const double rho = state.rho;
  const double th = state.theta;
  const double z = rho / (th * std::sqrt(th));
  const StructuralEval se = structural(closure, z);
  const double a = closure.a();
  const double th3 = th * th * th;
  const double th4 = th3 * th;

  EosEval r{};
  r.p = rho * th * se.p_over_z + (a / 3.0) * th4;
  r.e = 1.5 * th * se.p_over_z + a * th4 / rho;
  r.s = se.s + (4.0 * a / 3.0) * th3 / rho + closure.params().entropy_offset;
  r.dp_drho = th * se.dp_dz;
  r.dp_dtheta = 1.5 * rho * se.f_over_z + (4.0 * a / 3.0) * th3;
  r.de_drho = 1.5 * (th / rho) * (se.dp_dz - se.p_over_z) - a * th4 / (rho * rho);
  r.de_dtheta = 2.25 * se.f_over_z + 4.0 * a * th3 / rho;
  r.ds_drho = se.z_ds_dz / rho - (4.0 * a / 3.0) * th3 / (rho * rho);
  r.ds_dtheta = -1.5 * se.z_ds_dz / th + 4.0 * a * th * th / rho;
  return r;
}

double sound_speed_squared(const EosEval& eos, ThermoState state) {
  return eos.dp_drho +
         state.theta * eos.dp_dtheta * eos.dp_dtheta / (state.rho * state.rho * eos.de_dtheta);
}

Transport transport(const ThermoClosure& closure, double theta) {
  require_nonnegative(theta, "theta");
  const auto& p = closure.params();
  Transport t{};
  if (p.lambda == 1.0) {
    t.mu = p.mu0 * (1.0 + theta);
    t.dmu_dtheta = p.mu0;
  } else {
    // Smoothed growth keeps |mu'| bounded at theta = 0.
    const double w = 1.0 + theta * theta;
    const double g = std::pow(w, 0.5 * p.lambda);
    t.mu = p.mu0 * (1.0 + g);
    t.dmu_dtheta = p.mu0 * p.lambda * theta * g / w;
  }
  t.kappa = p.kappa0 * (1.0 + theta * theta * theta);
  t.dkappa_dtheta = 3.0 * p.kappa0 * theta * theta;
  return t;
}

double scaled_temperature(const ThermoClosure& closure, double theta) {
  require_nonnegative(theta, "theta");
  const double t2 = theta * theta;
  return closure.params().kappa0 * (theta + 0.25 * t2 * t2);
}

double temperature_from_scaled(const ThermoClosure& closure, double xi) {
  require_nonnegative(xi, "Xi");
  if (xi == 0.0) return 0.0;
  // g(theta) = theta + theta^4/4 is convex and increasing, so Newton started
  // right of the root decreases monotonically onto it.
  const double y = xi / closure.params().kappa0;
  double th = std::min(y, std::sqrt(std::sqrt(4.0 * y)));
  for (int it = 0; it < kNewtonIterations; ++it) {
    const double t3 = th * th * th;
    const double g = th + 0.25 * t3 * th - y;
    const double next = th - g / (1.0 + t3);
    if (!(next < th)) return th;
    th = std::max(next, 0.0);
  }
  // Unreachable for kappa0 > 0; kept as a hard stop.
  throw NumericError("K^{-1} did not converge for Xi=" + std::to_string(xi));
}

double invert_temperature(const ThermoClosure& closure, double rho, double e_internal,
                          double theta_guess) {
  require_positive(rho, "rho");
  if (!std::isfinite(e_internal)) throw DomainError("internal energy is not finite");

  auto energy = [&](double th) { return eos_eval(closure, {rho, th}); };

  // Bracket in theta implied by the closure's Z range.
  double lo = 0.0;
  double hi_cap = std::numeric_limits<double>::infinity();
  if (closure.table() != nullptr) {
    lo = std::cbrt(std::pow(rho / closure.z_max(), 2.0)) * (1.0 + 1e-12);
    hi_cap = std::cbrt(std::pow(rho / closure.z_min(), 2.0)) * (1.0 - 1e-12);
    const double e_lo = energy(lo).e;
    if (e_internal < e_lo) {
      throw DomainError("internal energy " + std::to_string(e_internal) +
                        " below attainable minimum " + std::to_string(e_lo));
    }
  } else if (!(e_internal > 0.0)) {
    throw DomainError("internal energy must be positive for the ideal gas, got " +
                      std::to_string(e_internal));
  }

  double th = theta_guess > 0.0 ? theta_guess : std::max(e_internal / 1.5, 2.0 * lo);
  th = std::clamp(th, lo > 0.0 ? lo : std::numeric_limits<double>::min(), hi_cap);
  double hi = std::numeric_limits<double>::infinity();
  const double tol = 1e-12 * (1.0 + std::abs(e_internal));

  for (int it = 0; it < kNewtonIterations; ++it) {
    const EosEval ev = energy(th);
    const double res = ev.e - e_internal;
    if (res > 0.0) {
      hi = std::min(hi, th);
    } else {
      lo = std::max(lo, th);
    }
    const double step = res / ev.de_dtheta;
    double next = th - step;
    if (!(next > lo && next < hi) || !std::isfinite(next)) {
      next = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * th;
      if (next > hi_cap) {
        throw RangeError("internal energy " + std::to_string(e_internal) +
                         " above the tabulated range at rho=" + std::to_string(rho));
      }
    }
    if (std::abs(res) <= tol && std::abs(next - th) <= 1e-14 * th) {
      return th;
    }
    if (next == th) {
      if (std::abs(res) <= tol) return th;
      break;
    }
    th = next;
  }

  // Bisection fallback on whatever bracket Newton left.
  if (!std::isfinite(hi)) {
    hi = std::max(th, 1.0);
    while (energy(hi).e < e_internal) {
      hi *= 2.0;
      if (hi > hi_cap) throw RangeError("internal energy above the tabulated range");
    }
  }
  for (int it = 0; it < kBisectionIterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (energy(mid).e > e_internal) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double root = 0.5 * (lo + hi);
  if (!(root > 0.0) || std::abs(energy(root).e - e_internal) > tol) {
    throw NumericError("temperature inversion failed at rho=" + std::to_string(rho) +
                       ", e=" + std::to_string(e_internal));
  }
  return root;
}

BallisticEval ballistic_free_energy(const ThermoClosure& closure, ThermoState state,
                                    double big_theta) {
  require_positive(big_theta, "Theta");
  const EosEval ev = eos_eval(closure, state);
  const double rho = state.rho;
  return BallisticEval{rho * ev.e - big_theta * rho * ev.s,
                       ev.e + rho * ev.de_drho - big_theta * (ev.s + rho * ev.ds_drho)};
}

}  // namespace nsf::thermo
