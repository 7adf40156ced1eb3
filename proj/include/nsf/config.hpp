#pragma once

// Run configuration: strict JSON schema, scenario-aware defaults, dot-path
// overrides and a canonical emission used for hashing.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "nsf/scenarios.hpp"
#include "nsf/thermo.hpp"

namespace nsf::config {

/// Schema violation; `path()` is the JSON path of the offending value, e.g. ".grid.N".
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error((path.empty() ? std::string(".") : path) + ": " + message),
        path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

struct ClosureConfig {
  std::string kind = "ideal-gas-radiative";
  double a = 0.1;
  double entropy_offset = 0.0;
  double mu0 = 1e-2;
  double lambda = 1.0;
  double kappa0 = 1e-2;
  double c_inf = 1.0;

  friend bool operator==(const ClosureConfig&, const ClosureConfig&) = default;
};

struct RunConfig {
  std::string scenario;
  ClosureConfig closure;
  std::size_t n = 128;
  double length = 1.0;
  double t_end = 0.0;
  double output_dt = 0.0;
  double cfl_adv = 0.4;
  double cfl_diff = 0.25;
  double g_threshold = 0.0;  // +inf disables the monitor stop
  std::string limiter = "minmod";
  std::optional<std::string> trio;
  std::optional<std::string> reference_run;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::string output_dir = "nsflab-out";

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses and validates; missing fields take the scenario preset or the global defaults.
/// Top-level "N", "L", "t_end" and "output_dt" are accepted as shorthands for the
/// grid and time entries.
RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {});
RunConfig parse_config_json(nlohmann::json doc, const std::vector<std::string>& overrides = {});

/// Sets `key=value` (dot path) in the document; the value is read as JSON when it
/// parses, otherwise as a string.
void apply_override(nlohmann::json& doc, std::string_view assignment);

nlohmann::ordered_json to_json(const RunConfig& cfg);
/// Canonical pretty-printed JSON of the full effective config.
std::string emit(const RunConfig& cfg);

/// SHA-256 (hex) of the canonical emission with the output directory cleared.
std::string config_hash(const RunConfig& cfg);

thermo::ClosureParams closure_params(const RunConfig& cfg);
/// Builds the closure (certifying the compliant table when selected).
thermo::ThermoClosure make_closure(const RunConfig& cfg);
solver::Limiter limiter(const RunConfig& cfg);
scenarios::Perturbation perturbation(const RunConfig& cfg);

std::string sha256_hex(std::string_view data);

}  // namespace nsf::config
