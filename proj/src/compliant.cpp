#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <nlohmann/json.hpp>

#include "compliant_interpolant.hpp"
#include "nsf/thermo.hpp"

namespace nsf::thermo {
namespace {

constexpr std::string_view kHardSphereId = "hard-sphere-2/3";

// f(Z)/Z and its log-derivative Z d(f/Z)/dZ for the shipped f(Z) = (2/3) Z / (1+Z)^2.
double hard_sphere_f_over_z(double z) { return (2.0 / 3.0) / ((1.0 + z) * (1.0 + z)); }
double hard_sphere_f_over_z_dx(double z) {
  const double w = 1.0 + z;
  return -(4.0 / 3.0) * z / (w * w * w);
}

void require_known_f(std::string_view f_id) {
  if (f_id != kHardSphereId) {
    throw ArgumentError("unknown compliant structural function '" + std::string(f_id) +
                        "' (known: " + std::string(kHardSphereId) + ")");
  }
}

// Septic Hermite basis on [0, 1]: monomial coefficients from
// (v0, v0', v0''/1, v0''', v1, v1', v1'', v1''') with derivatives in t.
constexpr double kHermite[8][8] = {
    {1, 0, 0, 0, 0, 0, 0, 0},
    {0, 1, 0, 0, 0, 0, 0, 0},
    {0, 0, 0.5, 0, 0, 0, 0, 0},
    {0, 0, 0, 1.0 / 6.0, 0, 0, 0, 0},
    {-35, -20, -5, -2.0 / 3.0, 35, -15, 2.5, -1.0 / 6.0},
    {84, 45, 10, 1, -84, 39, -7, 0.5},
    {-70, -36, -7.5, -2.0 / 3.0, 70, -34, 6.5, -0.5},
    {20, 10, 2, 1.0 / 6.0, -20, 10, -2, 1.0 / 6.0},
};

struct KnotJet {
  double g, g1, g2, g3;  // g and its first three x-derivatives
};

KnotJet knot_jet(const CompliantTable& t, std::size_t k) {
  const double z = t.z[k];
  const double q = std::cbrt(z * z) * t.tail[k];
  const double fz = hard_sphere_f_over_z(z);
  const double q1 = (2.0 / 3.0) * q - fz;
  const double q2 = (2.0 / 3.0) * q1 - hard_sphere_f_over_z_dx(z);
  return {1.5 * q - t.s[k], q, q1, q2};
}

}  // namespace

double compliant_f_over_z(std::string_view f_id, double z) {
  require_known_f(f_id);
  return hard_sphere_f_over_z(z);
}

CompliantInterpolant::CompliantInterpolant(CompliantTable table) : table_(std::move(table)) {
  require_known_f(table_.f_id);
  const std::size_t n = table_.z.size();
  if (n < 2 || table_.p.size() != n || table_.s.size() != n || table_.tail.size() != n) {
    throw ArgumentError("compliant table: Z, P, S, I must have equal length >= 2");
  }
  if (!(table_.c_inf > 0.0)) {
    throw ArgumentError("compliant table: C_inf must be positive");
  }
  x_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(table_.z[k] > 0.0) || (k > 0 && !(table_.z[k] > table_.z[k - 1]))) {
      throw ArgumentError("compliant table: Z knots must be positive and strictly increasing");
    }
    x_[k] = std::log(table_.z[k]);
  }
  coeffs_.resize(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double h = x_[k + 1] - x_[k];
    const KnotJet a = knot_jet(table_, k);
    const KnotJet b = knot_jet(table_, k + 1);
    const double data[8] = {a.g, h * a.g1, h * h * a.g2, h * h * h * a.g3,
                            b.g, h * b.g1, h * h * b.g2, h * h * h * b.g3};
    for (int i = 0; i < 8; ++i) {
      double c = 0.0;
      for (int j = 0; j < 8; ++j) c += kHermite[i][j] * data[j];
      coeffs_[k][i] = c;
    }
  }
}

StructuralEval CompliantInterpolant::eval(double z) const {
  if (!(z >= z_min() && z <= z_max())) {
    throw RangeError("Z=" + std::to_string(z) + " outside compliant table [" +
                     std::to_string(z_min()) + ", " + std::to_string(z_max()) + "]");
  }
  const double x = std::log(z);
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t k = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  k = std::min(k, coeffs_.size() - 1);
  const double h = x_[k + 1] - x_[k];
  const double t = std::clamp((x - x_[k]) / h, 0.0, 1.0);
  const auto& c = coeffs_[k];

  double v = c[7], d1 = 7.0 * c[7], d2 = 42.0 * c[7];
  for (int j = 6; j >= 0; --j) v = v * t + c[j];
  for (int j = 6; j >= 1; --j) d1 = d1 * t + j * c[j];
  for (int j = 6; j >= 2; --j) d2 = d2 * t + j * (j - 1) * c[j];
  const double q = d1 / h;
  const double q1 = d2 / (h * h);

  const double cz = table_.c_inf * std::cbrt(z * z);
  StructuralEval out{};
  out.p_over_z = cz + q;
  out.dp_dz = (5.0 / 3.0) * cz + q + q1;
  out.f_over_z = (2.0 / 3.0) * q - q1;
  out.s = 1.5 * q - v;
  out.z_ds_dz = -1.5 * out.f_over_z;
  return out;
}

CompliantTable tabulate_compliant(const CompliantParams& grid) {
  require_known_f(grid.f_id);
  if (!(grid.z_min > 0.0 && grid.z_max > grid.z_min && grid.knots_per_decade >= 4 &&
        grid.c_inf > 0.0)) {
    throw ArgumentError("compliant grid: need 0 < z_min < z_max, knots_per_decade >= 4, C_inf > 0");
  }
  const double x0 = std::log(grid.z_min);
  const double x1 = std::log(grid.z_max);
  const double decades = std::log10(grid.z_max / grid.z_min);
  const auto n = static_cast<std::size_t>(std::ceil(decades * grid.knots_per_decade)) + 1;
  const double h = (x1 - x0) / static_cast<double>(n - 1);

  CompliantTable t;
  t.f_id = grid.f_id;
  t.c_inf = grid.c_inf;
  t.z.resize(n);
  t.p.resize(n);
  t.s.resize(n);
  t.tail.resize(n);
  for (std::size_t k = 0; k < n; ++k) t.z[k] = std::exp(x0 + h * static_cast<double>(k));
  t.z.front() = grid.z_min;
  t.z.back() = grid.z_max;

  // In x = ln t:  I integrand = (f/t) t^{-2/3},  S integrand = (3/2) f/t.
  auto tail_integrand = [](double x) {
    const double z = std::exp(x);
    return hard_sphere_f_over_z(z) * std::exp(-2.0 * x / 3.0);
  };
  auto entropy_integrand = [](double x) { return 1.5 * hard_sphere_f_over_z(std::exp(x)); };

  // Beyond Z_max, f/Z ~ c2 Z^{-2}.
  const double zt = t.z.back();
  const double c2 = hard_sphere_f_over_z(zt) * zt * zt;
  t.tail.back() = 0.375 * c2 * std::pow(zt, -8.0 / 3.0);
  t.s.back() = 0.75 * c2 / (zt * zt);

  using Gauss = boost::math::quadrature::gauss<double, 10>;
  for (std::size_t k = n - 1; k-- > 0;) {
    const double a = std::log(t.z[k]);
    const double b = std::log(t.z[k + 1]);
    t.tail[k] = t.tail[k + 1] + Gauss::integrate(tail_integrand, a, b);
    t.s[k] = t.s[k + 1] + Gauss::integrate(entropy_integrand, a, b);
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double z = t.z[k];
    t.p[k] = z * std::cbrt(z * z) * (t.c_inf + t.tail[k]);
  }
  return t;
}

ThermoClosure closure_from_table(const ClosureParams& params, const CompliantTable& table) {
  ClosureParams p = params;
  p.kind = ClosureKind::HardSphereCompliant;
  return ThermoClosure(p, std::make_shared<const CompliantInterpolant>(table));
}

const CompliantTable& compliant_table(const ThermoClosure& closure) {
  if (closure.table() == nullptr) throw ArgumentError("closure has no compliant table");
  return closure.table()->data();
}

ThermoClosure build_compliant_closure(const ClosureParams& params, const CompliantParams& grid) {
  ThermoClosure closure = closure_from_table(params, tabulate_compliant(grid));

  // Knot grid and a dense log-spaced sample over the inner range.
  const double lo = grid.z_min;
  const double hi = grid.z_max;
  const CertificationReport report = certify(closure, lo, hi, 4000);
  if (!report.passed()) {
    throw CertificationError(report.first_failure, report.first_failure_z,
                             "sup ratio " + std::to_string(report.ratio_sup));
  }
  return closure;
}

CertificationReport certify(const ThermoClosure& closure, double z_lo, double z_hi,
                            std::size_t samples, double entropy_tol) {
  if (samples < 2 || !(z_lo > 0.0) || !(z_hi > z_lo)) {
    throw ArgumentError("certify: need samples >= 2 and 0 < z_lo < z_hi");
  }
  CertificationReport r;
  r.samples = samples;
  r.p_increasing = true;
  r.ratio_bracketed = true;
  r.ratio_sup = -std::numeric_limits<double>::infinity();
  r.ratio_inf = std::numeric_limits<double>::infinity();

  auto fail = [&r](const char* what, double z) {
    if (r.first_failure.empty()) {
      r.first_failure = what;
      r.first_failure_z = z;
    }
  };

  const double step = std::log(z_hi / z_lo) / static_cast<double>(samples - 1);
  for (std::size_t j = 0; j < samples; ++j) {
    const double z = j + 1 == samples ? z_hi : z_lo * std::exp(step * static_cast<double>(j));
    const StructuralEval se = structural(closure, z);
    if (!(se.dp_dz > 0.0)) {
      r.p_increasing = false;
      fail("P'(Z) > 0", z);
    }
    const double ratio = se.f_over_z;
    if (!(ratio > 0.0) || !std::isfinite(ratio)) {
      r.ratio_bracketed = false;
      fail("0 < ((5/3)P - P'Z)/Z < c", z);
    }
    r.ratio_sup = std::max(r.ratio_sup, ratio);
    r.ratio_inf = std::min(r.ratio_inf, ratio);
  }

  // P(0) = 0: P vanishes linearly as Z -> 0, i.e. P/Z settles to a finite slope.
  const StructuralEval low = structural(closure, z_lo);
  const StructuralEval low10 = structural(closure, std::min(10.0 * z_lo, z_hi));
  r.p_over_z_at_zmin = low.p_over_z;
  r.p_zero_at_origin = std::isfinite(low.p_over_z) && low.p_over_z > 0.0 &&
                       std::abs(low.p_over_z - low10.p_over_z) <= 0.05 * low.p_over_z;
  if (!r.p_zero_at_origin) fail("P(0) = 0", z_lo);

  // lim P/Z^{5/3} > 0: positive and settled over the last decade of the sample.
  const StructuralEval high = structural(closure, z_hi);
  const StructuralEval prev = structural(closure, z_hi / 10.0);
  r.limit_estimate = high.p_over_z / std::cbrt(z_hi * z_hi);
  const double prev_limit = prev.p_over_z / std::cbrt(z_hi * z_hi / 100.0);
  r.positive_limit =
      r.limit_estimate > 0.0 && std::abs(r.limit_estimate - prev_limit) <= 1e-3 * r.limit_estimate;
  if (!r.positive_limit) fail("lim P(Z)/Z^{5/3} > 0", z_hi);

  r.entropy_at_zmax = high.s;
  r.entropy_normalized = std::abs(high.s) < entropy_tol;
  if (!r.entropy_normalized) fail("lim S(Z) = 0", z_hi);
  return r;
}

std::string table_to_json(const CompliantTable& table) {
  nlohmann::ordered_json j;
  j["format_version"] = CompliantTable::kFormatVersion;
  j["f_id"] = table.f_id;
  j["C_inf"] = table.c_inf;
  j["Z"] = table.z;
  j["P"] = table.p;
  j["S"] = table.s;
  j["I"] = table.tail;
  return j.dump();
}

CompliantTable table_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("compliant table: malformed JSON: ") + e.what());
  }
  try {
    if (j.at("format_version").get<int>() != CompliantTable::kFormatVersion) {
      throw ArgumentError("compliant table: unsupported format_version " +
                          j.at("format_version").dump());
    }
    CompliantTable t;
    t.f_id = j.at("f_id").get<std::string>();
    t.c_inf = j.at("C_inf").get<double>();
    t.z = j.at("Z").get<std::vector<double>>();
    t.p = j.at("P").get<std::vector<double>>();
    t.s = j.at("S").get<std::vector<double>>();
    t.tail = j.at("I").get<std::vector<double>>();
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("compliant table: ") + e.what());
  }
}

void save_table(const CompliantTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write table file " + path);
  out << table_to_json(table) << '\n';
}

CompliantTable load_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot read table file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return table_from_json(ss.str());
}

}  // namespace nsf::thermo
