#include "nsf/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace nsf::scenarios {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

// Colliding streams: u = kStreamSpeed sin(2 pi x / L) drives the two halves into
// each other at the midpoint. With the default transport scales the viscous shock
// is too thick for the gradient to grow much, so the preset uses 1e-3 instead.
constexpr double kStreamSpeed = 2.0;
constexpr double kStreamTransport = 1e-3;
constexpr double kMonitorThreshold = 150.0;

struct Entry {
  ScenarioInfo info;
  ScenarioDefaults defaults;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {{"rest", "uniform gas at rest (rho = 1, u = 0, theta = 1)"},
       {0.1, 0.01, kMonitorThreshold, solver::Limiter::Minmod}},
      {{"acoustic-pulse", "small Gaussian density bump at mid-slab, uniform temperature, at rest"},
       {0.5, 0.025, kMonitorThreshold, solver::Limiter::Minmod}},
      {{"heat-relaxation", "cosine temperature profile relaxing by conduction, uniform density"},
       {0.5, 0.025, kMonitorThreshold, solver::Limiter::Minmod}},
      {{"colliding-streams", "opposing velocity streams meeting at mid-slab; steepens into a shock"},
       {0.5, 0.01, kMonitorThreshold, solver::Limiter::Minmod, kStreamTransport, kStreamTransport}},
      {{"mms-smooth", "manufactured smooth solution driven by an analytic source"},
       {0.5, 0.05, kInf, solver::Limiter::None}},
      {{"decaying-shear", "small sinusoidal velocity mode damped by viscosity"},
       {0.5, 0.025, kMonitorThreshold, solver::Limiter::Minmod}},
  };
  return entries;
}

const Entry& find(std::string_view id) {
  for (const Entry& e : registry()) {
    if (e.info.id == id) return e;
  }
  throw ArgumentError("unknown scenario '" + std::string(id) + "'; known: " + known_ids());
}

double unit_uniform(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

std::vector<double> perturbation_profile(const solver::Grid1D& grid, const Perturbation& pert) {
  std::vector<double> factor(grid.size(), 1.0);
  if (pert.epsilon == 0.0) return factor;
  std::mt19937_64 gen(pert.seed);
  double coeff[Perturbation::kModes];
  for (int m = 0; m < Perturbation::kModes; ++m) {
    coeff[m] = (2.0 * unit_uniform(gen) - 1.0) / (m + 1);
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double xi = grid.x(i) / grid.length();
    double sum = 0.0;
    for (int m = 0; m < Perturbation::kModes; ++m) sum += coeff[m] * std::cos((m + 1) * kPi * xi);
    factor[i] = 1.0 + pert.epsilon * sum;
  }
  return factor;
}

}  // namespace

const std::vector<ScenarioInfo>& list() {
  static const std::vector<ScenarioInfo> infos = [] {
    std::vector<ScenarioInfo> out;
    for (const Entry& e : registry()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

bool is_known(std::string_view id) {
  return std::any_of(registry().begin(), registry().end(),
                     [&](const Entry& e) { return e.info.id == id; });
}

std::string known_ids() {
  std::string out;
  for (const Entry& e : registry()) {
    if (!out.empty()) out += ", ";
    out += e.info.id;
  }
  return out;
}

const ScenarioDefaults& defaults(std::string_view id) { return find(id).defaults; }

bool is_manufactured(std::string_view id) { return id == "mms-smooth"; }

InitialFields initial_fields(std::string_view id, const solver::Grid1D& grid,
                             const Perturbation& perturbation) {
  find(id);
  if (!std::isfinite(perturbation.epsilon) || std::abs(perturbation.epsilon) >= 0.5) {
    throw ArgumentError("perturbation epsilon must satisfy |epsilon| < 0.5");
  }
  const std::size_t n = grid.size();
  const double len = grid.length();
  InitialFields f{std::vector<double>(n, 1.0), std::vector<double>(n, 0.0),
                  std::vector<double>(n, 1.0)};

  for (std::size_t i = 0; i < n; ++i) {
    const double xi = grid.x(i) / len;
    if (id == "acoustic-pulse") {
      const double w = (xi - 0.5) / 0.08;
      f.rho[i] = 1.0 + 0.05 * std::exp(-w * w);
    } else if (id == "heat-relaxation") {
      f.theta[i] = 1.0 + 0.5 * std::cos(kPi * xi);
    } else if (id == "colliding-streams") {
      f.u[i] = kStreamSpeed * std::sin(2.0 * kPi * xi);
    } else if (id == "decaying-shear") {
      f.u[i] = 0.05 * std::sin(2.0 * kPi * xi);
    } else if (id == "mms-smooth") {
      const auto m = solver::ManufacturedSolution(len).fields(0.0, grid.x(i));
      f.rho[i] = m.rho;
      f.u[i] = m.u;
      f.theta[i] = m.theta;
    }
  }

  const std::vector<double> factor = perturbation_profile(grid, perturbation);
  for (std::size_t i = 0; i < n; ++i) {
    f.rho[i] *= factor[i];
    f.theta[i] *= factor[i];
  }
  return f;
}

}  // namespace nsf::scenarios
