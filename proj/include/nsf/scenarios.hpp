#pragma once

// Preset initial data for the slab runs.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nsf/solver.hpp"

namespace nsf::scenarios {

struct ScenarioInfo {
  std::string id;
  std::string description;
};

/// Preset run parameters a config falls back to when it leaves them unset.
struct ScenarioDefaults {
  double t_end;
  double output_dt;
  double g_threshold;
  solver::Limiter limiter;
  // Transport scales replacing the closure defaults for this preset (0 = keep).
  double mu0 = 0.0;
  double kappa0 = 0.0;
};

/// Multiplicative perturbation of rho and theta by
/// 1 + epsilon * sum_m c_m cos(m pi x / L), m = 1..kModes, with seeded c_m in [-1, 1] / m.
struct Perturbation {
  static constexpr int kModes = 4;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
};

const std::vector<ScenarioInfo>& list();
bool is_known(std::string_view id);
/// Comma-separated id list for error messages.
std::string known_ids();

const ScenarioDefaults& defaults(std::string_view id);

/// Point values of (rho, u, theta) at the cell centers.
struct InitialFields {
  std::vector<double> rho;
  std::vector<double> u;
  std::vector<double> theta;
};

InitialFields initial_fields(std::string_view id, const solver::Grid1D& grid,
                             const Perturbation& perturbation = {});

/// Forced scenarios carry a manufactured solution; others return false.
bool is_manufactured(std::string_view id);

}  // namespace nsf::scenarios
