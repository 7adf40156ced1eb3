#pragma once

// Files of a run directory:
//   config.json                effective configuration
//   manifest.json              format version, config hash, snapshot list, stop reason
//   snapshots/snap_NNNNN.csv   t,x,rho,u,theta,p,Xi,s per cell
//   diagnostics.csv            one row per output time
//   diagnostics_summary.json   verdicts, suprema, tolerances, Gronwall check

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "nsf/diagnostics.hpp"
#include "nsf/solver.hpp"

namespace nsf::io {

inline constexpr int kManifestFormatVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

/// Missing file, unreadable content or a version/hash mismatch.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// 17 significant digits; round-trips every binary64 value.
std::string format_double(double v);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

std::string snapshot_csv(const thermo::ThermoClosure& closure, const solver::Grid1D& grid,
                         double t, const solver::Primitives& prim);

/// Reads (t, rho, u, theta) back and recomputes p and Xi; checks the cell count and x.
diagnostics::Frame parse_snapshot_csv(const thermo::ThermoClosure& closure,
                                      const solver::Grid1D& grid, const std::string& text,
                                      const std::string& origin);

struct SnapshotEntry {
  double t;
  std::string file;  // relative to the run directory
  std::array<double, 3> injected{};
};

struct Manifest {
  int format_version = kManifestFormatVersion;
  std::string tool_version = kToolVersion;
  std::string config_hash;
  std::string scenario;
  std::string stop_reason;
  std::string stop_detail;
  double stop_time = 0.0;
  std::vector<SnapshotEntry> snapshots;
};

std::string manifest_json(const Manifest& m);
Manifest parse_manifest(const std::string& text);

std::string report_csv(const diagnostics::DiagnosticsReport& report);
std::string summary_json(const diagnostics::DiagnosticsReport& report);

}  // namespace nsf::io
