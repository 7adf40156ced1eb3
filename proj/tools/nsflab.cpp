#include <exception>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nsf/commands.hpp"
#include "nsf/config.hpp"
#include "nsf/io.hpp"

namespace fs = std::filesystem;
using namespace nsf;

namespace {

config::RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides,
                              const std::string& fallback_scenario) {
  if (path.empty()) {
    nlohmann::json doc = {{"scenario", fallback_scenario}};
    return config::parse_config_json(doc, overrides);
  }
  return config::parse_config(io::read_file(path), overrides);
}

std::vector<std::size_t> parse_resolutions(const std::string& list) {
  std::vector<std::size_t> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != item.size() || v < 8) {
      throw config::ConfigError("--n", "bad resolution '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

int cmd_run(const std::string& config_path, const std::string& out,
            const std::vector<std::string>& overrides) {
  if (config_path.empty()) throw config::ConfigError("", "run needs --config");
  config::RunConfig cfg = load_config(config_path, overrides, "");
  if (!out.empty()) cfg.output_dir = out;
  const auto outcome = commands::run(cfg, cfg.output_dir);
  const auto& s = outcome.report.summary;
  std::cout << "scenario " << cfg.scenario << ": " << solver::to_string(outcome.result.stop_reason)
            << " at t=" << io::format_double(outcome.result.stop_time) << "\n";
  if (!outcome.result.stop_detail.empty()) std::cout << "  " << outcome.result.stop_detail << "\n";
  std::cout << "  grad_u_inf initial " << io::format_double(s.grad_u_initial) << ", max "
            << io::format_double(s.grad_u_max) << "\n"
            << "  output in " << cfg.output_dir << "\n";
  return outcome.exit_code;
}

int cmd_mms(const std::string& config_path, const std::string& out,
            const std::vector<std::string>& overrides, const std::string& resolutions) {
  const config::RunConfig cfg = load_config(config_path, overrides, "mms-smooth");
  if (cfg.scenario != "mms-smooth") {
    throw config::ConfigError(".scenario", "mms-verify needs scenario 'mms-smooth'");
  }
  const auto rows = commands::mms_convergence(cfg, parse_resolutions(resolutions));
  const std::string csv = commands::convergence_csv(rows);
  std::cout << csv;
  if (!out.empty()) io::write_file(fs::path(out) / "mms_convergence.csv", csv);
  const double order = commands::min_order(rows);
  if (!(order >= commands::kMinMmsOrder)) {
    std::cerr << "observed order " << order << " below " << commands::kMinMmsOrder << "\n";
    return commands::kExitVerification;
  }
  return commands::kExitOk;
}

int cmd_diagnose(const std::string& run_dir, const std::string& out, bool check) {
  const auto report = commands::rediagnose(run_dir);
  const std::string csv = io::report_csv(report);
  const std::string summary = io::summary_json(report);
  const fs::path target = out.empty() ? fs::path(run_dir) / "rediagnosed" : fs::path(out);
  io::write_file(target / "diagnostics.csv", csv);
  io::write_file(target / "diagnostics_summary.json", summary);
  std::cout << "report written to " << target.string() << "\n";
  if (check) {
    const bool same = io::read_file(fs::path(run_dir) / "diagnostics.csv") == csv &&
                      io::read_file(fs::path(run_dir) / "diagnostics_summary.json") == summary;
    std::cout << (same ? "identical to the stored report\n" : "DIFFERS from the stored report\n");
    if (!same) return commands::kExitVerification;
  }
  return commands::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nsflab: 1-D Navier-Stokes-Fourier laboratory"};
  app.require_subcommand(1);

  std::string config_path, out, run_dir, resolutions = "64,128,256";
  std::vector<std::string> overrides;
  bool check = false;

  auto* run = app.add_subcommand("run", "integrate a scenario and write a run directory");
  run->add_option("--config", config_path, "run configuration (JSON)")->required();
  run->add_option("--out", out, "output directory (overrides output.dir)");
  run->add_option("--override", overrides, "key=value with a dot path, e.g. grid.N=256");

  auto* mms = app.add_subcommand("mms-verify", "convergence table on the manufactured solution");
  mms->add_option("--config", config_path, "run configuration (JSON); defaults to mms-smooth");
  mms->add_option("--out", out, "directory for mms_convergence.csv");
  mms->add_option("--override", overrides, "key=value with a dot path");
  mms->add_option("--n", resolutions, "comma-separated resolutions")->capture_default_str();

  auto* diag = app.add_subcommand("diagnose", "recompute the diagnostics of a stored run");
  diag->add_option("run_dir", run_dir, "run directory")->required();
  diag->add_option("--out", out, "where to write the report (default <run_dir>/rediagnosed)");
  diag->add_flag("--check", check, "compare against the stored report bytes");

  auto* list = app.add_subcommand("scenarios", "list scenario presets and test trios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : commands::kExitConfig;
  }

  try {
    if (*run) return cmd_run(config_path, out, overrides);
    if (*mms) return cmd_mms(config_path, out, overrides, resolutions);
    if (*diag) return cmd_diagnose(run_dir, out, check);
    if (*list) {
      std::cout << commands::scenarios_text();
      return commands::kExitOk;
    }
  } catch (const config::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return commands::kExitConfig;
  } catch (const CertificationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return commands::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return commands::kExitError;
  }
  return commands::kExitError;
}
