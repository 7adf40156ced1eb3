#include "nsf/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "nsf/scenarios.hpp"

namespace nsf::commands {
namespace {

namespace fs = std::filesystem;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string snapshot_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshots/snap_%05zu.csv", k);
  return buf;
}

solver::State initial_state(const thermo::ThermoClosure& closure, const config::RunConfig& cfg,
                            const solver::Grid1D& grid) {
  const auto f = scenarios::initial_fields(cfg.scenario, grid, config::perturbation(cfg));
  return solver::state_from_primitives(closure, f.rho, f.u, f.theta);
}

solver::RunSettings settings(const config::RunConfig& cfg) {
  solver::RunSettings rs;
  rs.t_end = cfg.t_end;
  rs.output_dt = cfg.output_dt;
  rs.dt_policy = {cfg.cfl_adv, cfg.cfl_diff};
  rs.limiter = config::limiter(cfg);
  rs.g_threshold = cfg.g_threshold;
  return rs;
}

/// Reference frames for the weak-strong gap, cut to the frames of this run.
diagnostics::FrameSeries reference_frames(const config::RunConfig& cfg,
                                          const diagnostics::FrameSeries& frames) {
  LoadedRun ref = load_run(*cfg.reference_run);
  if (ref.cfg.n != cfg.n || ref.cfg.length != cfg.length) {
    throw io::IoError("reference run " + *cfg.reference_run + " uses a different grid");
  }
  if (!(ref.cfg.closure == cfg.closure)) {
    throw io::IoError("reference run " + *cfg.reference_run + " uses a different closure");
  }
  if (ref.frames.size() < frames.size()) {
    throw io::IoError("reference run " + *cfg.reference_run + " has " +
                      std::to_string(ref.frames.size()) + " snapshots, this run needs " +
                      std::to_string(frames.size()));
  }
  ref.frames.resize(frames.size());
  return ref.frames;
}

diagnostics::DiagnosticsReport report_for(const thermo::ThermoClosure& closure,
                                          const config::RunConfig& cfg,
                                          const solver::Grid1D& grid,
                                          const diagnostics::FrameSeries& frames,
                                          const std::string& stop_reason) {
  diagnostics::ReportOptions opt;
  opt.scenario = cfg.scenario;
  opt.stop_reason = stop_reason;
  opt.g_threshold = cfg.g_threshold;
  opt.forced = scenarios::is_manufactured(cfg.scenario);
  if (cfg.trio) opt.trio = diagnostics::make_trio(*cfg.trio, cfg.length);
  diagnostics::FrameSeries ref;
  if (cfg.reference_run) {
    ref = reference_frames(cfg, frames);
    opt.reference = &ref;
  }
  return diagnostics::build_report(closure, grid, frames, opt);
}

}  // namespace

int exit_code_for(const solver::RunResult& result, const diagnostics::ReportSummary& s,
                  bool forced) {
  if (result.stop_reason != solver::StopReason::Completed) return kExitBlowUp;
  bool ok = s.conservation_ok && s.sigma_nonnegative;
  if (s.entropy_inequality_ok) ok = ok && *s.entropy_inequality_ok;
  if (!forced) ok = ok && s.envelopes_contained;
  if (s.rei_ok) ok = ok && *s.rei_ok;
  if (s.gronwall) ok = ok && s.gronwall->within;
  return ok ? kExitOk : kExitVerification;
}

RunOutcome run(const config::RunConfig& cfg, const fs::path& out_dir) {
  const thermo::ThermoClosure closure = config::make_closure(cfg);
  const solver::Grid1D grid(cfg.n, cfg.length);

  solver::RunSettings rs = settings(cfg);
  std::optional<solver::ManufacturedSolution> mms;
  if (scenarios::is_manufactured(cfg.scenario)) {
    mms.emplace(cfg.length);
    rs.mms = &*mms;
  }

  RunOutcome out;
  out.result = solver::run(closure, grid, initial_state(closure, cfg, grid), rs);
  const std::string stop(solver::to_string(out.result.stop_reason));

  fs::create_directories(out_dir / "snapshots");
  io::Manifest manifest;
  manifest.config_hash = config::config_hash(cfg);
  manifest.scenario = cfg.scenario;
  manifest.stop_reason = stop;
  manifest.stop_detail = out.result.stop_detail;
  manifest.stop_time = out.result.stop_time;
  const auto& snaps = out.result.trajectory.snapshots;
  for (std::size_t k = 0; k < snaps.size(); ++k) {
    const std::string name = snapshot_name(k);
    io::write_file(out_dir / name, io::snapshot_csv(closure, grid, snaps[k].t, snaps[k].prim));
    manifest.snapshots.push_back({snaps[k].t, name, snaps[k].injected});
  }

  const diagnostics::FrameSeries frames = diagnostics::frames_from_trajectory(out.result.trajectory);
  out.report = report_for(closure, cfg, grid, frames, stop);

  io::write_file(out_dir / "config.json", config::emit(cfg));
  io::write_file(out_dir / "manifest.json", io::manifest_json(manifest));
  io::write_file(out_dir / "diagnostics.csv", io::report_csv(out.report));
  io::write_file(out_dir / "diagnostics_summary.json", io::summary_json(out.report));

  out.exit_code =
      exit_code_for(out.result, out.report.summary, scenarios::is_manufactured(cfg.scenario));
  return out;
}

std::vector<ConvergenceRow> mms_convergence(const config::RunConfig& cfg,
                                            const std::vector<std::size_t>& resolutions) {
  if (resolutions.size() < 2) throw ArgumentError("mms-verify needs at least two resolutions");
  const thermo::ThermoClosure closure = config::make_closure(cfg);
  const solver::ManufacturedSolution mms(cfg.length);

  std::vector<ConvergenceRow> rows;
  for (std::size_t n : resolutions) {
    const solver::Grid1D grid(n, cfg.length);
    std::vector<double> rho(n), u(n), theta(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto f = mms.fields(0.0, grid.x(i));
      rho[i] = f.rho;
      u[i] = f.u;
      theta[i] = f.theta;
    }
    solver::RunSettings rs = settings(cfg);
    rs.output_dt = cfg.t_end;
    rs.g_threshold = std::numeric_limits<double>::infinity();
    rs.mms = &mms;
    const auto res = solver::run(closure, grid, solver::state_from_primitives(closure, rho, u, theta), rs);
    if (res.stop_reason != solver::StopReason::Completed) {
      throw NumericError("mms run at N=" + std::to_string(n) + " stopped early: " + res.stop_detail);
    }
    const auto& last = res.trajectory.snapshots.back();
    ConvergenceRow row{};
    row.n = n;
    row.dx = grid.dx();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto f = mms.fields(last.t, grid.x(i));
      const double d[3] = {last.prim.rho[i] - f.rho, last.prim.u[i] - f.u,
                           last.prim.theta[i] - f.theta};
      for (int k = 0; k < 3; ++k) row.err[k] += d[k] * d[k];
    }
    for (int k = 0; k < 3; ++k) {
      total += row.err[k];
      row.err[k] = std::sqrt(row.err[k] * grid.dx());
    }
    row.err_total = std::sqrt(total * grid.dx());
    row.order = {kNaN, kNaN, kNaN};
    row.order_total = kNaN;
    if (!rows.empty()) {
      const ConvergenceRow& prev = rows.back();
      const double ratio = std::log(prev.dx / row.dx);
      for (int k = 0; k < 3; ++k) row.order[k] = std::log(prev.err[k] / row.err[k]) / ratio;
      row.order_total = std::log(prev.err_total / row.err_total) / ratio;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::string out =
      "N,dx,err_rho,err_u,err_theta,err_total,order_rho,order_u,order_theta,order_total\n";
  for (const ConvergenceRow& r : rows) {
    out += std::to_string(r.n);
    for (double v : {r.dx, r.err[0], r.err[1], r.err[2], r.err_total}) out += "," + io::format_double(v);
    for (double v : {r.order[0], r.order[1], r.order[2], r.order_total}) {
      out += ",";
      if (!std::isnan(v)) out += io::format_double(v);
    }
    out += "\n";
  }
  return out;
}

double min_order(const std::vector<ConvergenceRow>& rows) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < rows.size(); ++k) {
    for (double o : rows[k].order) m = std::min(m, o);
  }
  return m;
}

LoadedRun load_run(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw io::IoError("run directory " + dir.string() + " does not exist");
  LoadedRun run;
  run.manifest = io::parse_manifest(io::read_file(dir / "manifest.json"));
  run.cfg = config::parse_config(io::read_file(dir / "config.json"));
  const std::string hash = config::config_hash(run.cfg);
  if (hash != run.manifest.config_hash) {
    throw io::IoError("config hash mismatch in " + dir.string() + ": manifest has " +
                      run.manifest.config_hash + ", config.json hashes to " + hash);
  }
  const thermo::ThermoClosure closure = config::make_closure(run.cfg);
  const solver::Grid1D grid(run.cfg.n, run.cfg.length);
  for (const io::SnapshotEntry& e : run.manifest.snapshots) {
    diagnostics::Frame f =
        io::parse_snapshot_csv(closure, grid, io::read_file(dir / e.file), e.file);
    if (f.t != e.t) throw io::IoError(e.file + ": time does not match the manifest");
    f.injected = e.injected;
    run.frames.push_back(std::move(f));
  }
  if (run.frames.empty()) throw io::IoError("manifest in " + dir.string() + " lists no snapshots");
  return run;
}

diagnostics::DiagnosticsReport rediagnose(const fs::path& dir) {
  const LoadedRun run = load_run(dir);
  const thermo::ThermoClosure closure = config::make_closure(run.cfg);
  const solver::Grid1D grid(run.cfg.n, run.cfg.length);
  return report_for(closure, run.cfg, grid, run.frames, run.manifest.stop_reason);
}

std::string scenarios_text() {
  auto line = [](const std::string& id, const std::string& text) {
    std::string row = "  " + id;
    row.resize(std::max<std::size_t>(row.size() + 2, 22), ' ');
    return row + text + "\n";
  };
  std::string out = "scenarios:\n";
  for (const auto& s : scenarios::list()) out += line(s.id, s.description);
  out += "test trios:\n";
  for (const auto& t : diagnostics::list_trios()) out += line(t.id, t.description);
  return out;
}

}  // namespace nsf::commands
