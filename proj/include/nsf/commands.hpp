#pragma once

// The nsflab subcommands as library calls: run, mms-verify, diagnose, scenarios.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "nsf/config.hpp"
#include "nsf/diagnostics.hpp"
#include "nsf/io.hpp"
#include "nsf/solver.hpp"

namespace nsf::commands {

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,  // missing files, unreadable or mismatched run directories
  kExitConfig = 2,
  kExitBlowUp = 3,
  kExitVerification = 4,
};

struct RunOutcome {
  solver::RunResult result;
  diagnostics::DiagnosticsReport report;
  int exit_code;
};

/// Integrates the configured scenario and writes the run directory.
RunOutcome run(const config::RunConfig& cfg, const std::filesystem::path& out_dir);

/// Exit code for a finished run: 3 on an early stop, 4 when an applicable verdict fails.
int exit_code_for(const solver::RunResult& result, const diagnostics::ReportSummary& summary,
                  bool forced);

struct ConvergenceRow {
  std::size_t n;
  double dx;
  std::array<double, 3> err;  // L2 errors of rho, u, theta at t_end
  double err_total;
  std::array<double, 3> order;  // NaN on the coarsest row
  double order_total;
};

inline constexpr double kMinMmsOrder = 1.7;

std::vector<ConvergenceRow> mms_convergence(const config::RunConfig& cfg,
                                            const std::vector<std::size_t>& resolutions);
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);
/// Smallest observed order over all fields and refinements.
double min_order(const std::vector<ConvergenceRow>& rows);

struct LoadedRun {
  config::RunConfig cfg;
  io::Manifest manifest;
  diagnostics::FrameSeries frames;
};

/// Reads a run directory, refusing a manifest whose version or config hash does not match.
LoadedRun load_run(const std::filesystem::path& dir);

/// Recomputes the diagnostics report of a stored run.
diagnostics::DiagnosticsReport rediagnose(const std::filesystem::path& dir);

std::string scenarios_text();

}  // namespace nsf::commands
