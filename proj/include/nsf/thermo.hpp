#pragma once

// Gibbs-consistent constitutive closures for the Navier-Stokes-Fourier system.
//
// Every closure has the structural form
//   p = theta^{5/2} P(Z) + (a/3) theta^4,
//   e = (3/2) theta^{5/2} P(Z) / rho + a theta^4 / rho,
//   s = S(Z) + (4a/3) theta^3 / rho,          Z = rho / theta^{3/2},
// with S'(Z) = -(3/2) ((5/3) P - P' Z) / Z^2. Two structural functions P ship:
// the ideal gas P(Z) = Z and a tabulated hard-sphere-like P that satisfies the
// full set of structural hypotheses, including P(Z)/Z^{5/3} -> const > 0 and
// S(Z) -> 0 as Z -> infinity.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nsf/errors.hpp"

namespace nsf::thermo {

enum class ClosureKind { IdealGasRadiative, HardSphereCompliant };

std::string_view to_string(ClosureKind kind);
ClosureKind closure_kind_from_string(std::string_view name);

struct ClosureParams {
  ClosureKind kind = ClosureKind::IdealGasRadiative;
  double a = 0.1;               // radiation constant
  double entropy_offset = 0.0;  // additive constant in s
  double mu0 = 1e-2;
  double lambda = 1.0;  // viscosity growth exponent, in (2/5, 1]
  double kappa0 = 1e-2;
};

/// Quadrature grid for the compliant structural function.
struct CompliantParams {
  double c_inf = 1.0;  // lim P(Z)/Z^{5/3}
  double z_min = 1e-9;
  double z_max = 1e9;
  int knots_per_decade = 48;
  std::string f_id = "hard-sphere-2/3";
};

/// Tabulated structural data of the compliant closure.
/// `tail[k]` is Z^{-5/3} P(Z_k) - C_inf, the integral of f(t) t^{-8/3} over [Z_k, inf).
struct CompliantTable {
  static constexpr int kFormatVersion = 1;

  std::string f_id;
  double c_inf = 1.0;
  std::vector<double> z;
  std::vector<double> p;
  std::vector<double> s;
  std::vector<double> tail;
};

/// P(Z)/Z, P'(Z), S(Z) and Z S'(Z) at one point.
struct StructuralEval {
  double p_over_z;
  double dp_dz;
  double s;
  double z_ds_dz;
  double f_over_z;  // ((5/3) P - P' Z) / Z
};

class CompliantInterpolant;

/// Immutable constitutive package; cheap to copy (the table is shared).
class ThermoClosure {
public:
  ThermoClosure() = default;
  ThermoClosure(ClosureParams params, std::shared_ptr<const CompliantInterpolant> table);

  const ClosureParams& params() const noexcept { return params_; }
  ClosureKind kind() const noexcept { return params_.kind; }
  double a() const noexcept { return params_.a; }

  /// Non-null only for HardSphereCompliant.
  const CompliantInterpolant* table() const noexcept { return table_.get(); }

  /// Tabulated Z range, or [0, inf) for the ideal gas.
  double z_min() const noexcept;
  double z_max() const noexcept;

private:
  ClosureParams params_;
  std::shared_ptr<const CompliantInterpolant> table_;
};

struct ThermoState {
  double rho;
  double theta;
};

struct EosEval {
  double p, e, s;
  double dp_drho, dp_dtheta;
  double de_drho, de_dtheta;
  double ds_drho, ds_dtheta;
};

struct Transport {
  double mu;
  double dmu_dtheta;
  double kappa;
  double dkappa_dtheta;
};

struct BallisticEval {
  double value;    // rho e - Theta rho s
  double d_drho;   // e + rho e_rho - Theta (s + rho s_rho)
};

ThermoClosure make_ideal_gas_radiative(const ClosureParams& params);

/// Builds the compliant closure by quadrature and certifies it on the knot grid
/// plus a log-spaced sample; throws CertificationError naming the first violation.
ThermoClosure build_compliant_closure(const ClosureParams& params,
                                      const CompliantParams& grid = {});

/// Rebuilds a compliant closure from stored table data (no re-quadrature).
ThermoClosure closure_from_table(const ClosureParams& params, const CompliantTable& table);

CompliantTable tabulate_compliant(const CompliantParams& grid);

/// Stored table behind a compliant closure; throws ArgumentError for the ideal gas.
const CompliantTable& compliant_table(const ThermoClosure& closure);

StructuralEval structural(const ThermoClosure& closure, double z);

EosEval eos_eval(const ThermoClosure& closure, ThermoState state);

/// Full equation-of-state sound speed squared.
double sound_speed_squared(const EosEval& eos, ThermoState state);

Transport transport(const ThermoClosure& closure, double theta);

/// K(theta) = integral of kappa over [0, theta].
double scaled_temperature(const ThermoClosure& closure, double theta);
double temperature_from_scaled(const ThermoClosure& closure, double xi);

/// Unique theta with e(rho, theta) = e_internal.
/// `theta_guess` seeds Newton when positive.
double invert_temperature(const ThermoClosure& closure, double rho, double e_internal,
                          double theta_guess = -1.0);

BallisticEval ballistic_free_energy(const ThermoClosure& closure, ThermoState state,
                                    double big_theta);

/// Function f(Z) = (5/3) P - P' Z that defines a compliant closure, divided by Z.
double compliant_f_over_z(std::string_view f_id, double z);

struct CertificationReport {
  std::size_t samples = 0;
  bool p_zero_at_origin = false;
  bool p_increasing = false;
  bool ratio_bracketed = false;
  bool positive_limit = false;
  bool entropy_normalized = false;
  double ratio_sup = 0.0;     // sup of ((5/3)P - P'Z)/Z over the sample
  double ratio_inf = 0.0;
  double limit_estimate = 0.0;  // P(Z_max) / Z_max^{5/3}
  double entropy_at_zmax = 0.0;
  double p_over_z_at_zmin = 0.0;
  std::string first_failure;
  double first_failure_z = 0.0;

  bool passed() const noexcept {
    return p_zero_at_origin && p_increasing && ratio_bracketed && positive_limit &&
           entropy_normalized;
  }
};

/// Checks the structural hypotheses on `samples` log-spaced points in [z_lo, z_hi].
CertificationReport certify(const ThermoClosure& closure, double z_lo, double z_hi,
                            std::size_t samples, double entropy_tol = 1e-6);

std::string table_to_json(const CompliantTable& table);
CompliantTable table_from_json(std::string_view text);
void save_table(const CompliantTable& table, const std::string& path);
CompliantTable load_table(const std::string& path);

}  // namespace nsf::thermo
