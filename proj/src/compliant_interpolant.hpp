#pragma once

#include <array>
#include <vector>

#include "nsf/thermo.hpp"

namespace nsf::thermo {

// Residual free-energy potential g(x), x = ln Z, for the compliant closure:
//   (3/2) P/Z - S = (3/2) C_inf Z^{2/3} + g(x).
// With q = g_x the structural functions follow exactly:
//   P/Z = C_inf Z^{2/3} + q,   P' = (5/3) C_inf Z^{2/3} + q + q_x,
//   S = (3/2) q - g,           Z S' = (3/2) q_x - q = -(3/2) f/Z,
//   f/Z = (2/3) q - q_x.
// g is interpolated by septic Hermite pieces (C^3) from exact knot derivatives.
class CompliantInterpolant {
public:
  explicit CompliantInterpolant(CompliantTable table);

  const CompliantTable& data() const noexcept { return table_; }
  double z_min() const noexcept { return table_.z.front(); }
  double z_max() const noexcept { return table_.z.back(); }

  /// Throws RangeError outside [z_min, z_max].
  StructuralEval eval(double z) const;

private:
  CompliantTable table_;
  std::vector<double> x_;
  std::vector<std::array<double, 8>> coeffs_;
};

}  // namespace nsf::thermo
