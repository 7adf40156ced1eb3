#include "nsf/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace nsf::io {
namespace {

using ojson = nlohmann::ordered_json;

constexpr const char* kSnapshotHeader = "t,x,rho,u,theta,p,Xi,s";
constexpr const char* kReportHeader =
    "t,M,E_tot,S_tot,sigma_total,sigma_min,grad_u_inf,div_u_inf,sobolev1,sobolev2,sobolev3,"
    "Xi_lower,rho_lower,rho_upper,Xi_upper,rel_entropy,rei_residual,stop_reason";

double parse_double(const std::string& field, const std::string& origin, std::size_t line) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size() || errno == ERANGE) {
    throw IoError(origin + ":" + std::to_string(line) + ": bad number '" + field + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

template <class T>
ojson opt(const std::optional<T>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

ojson finite_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string snapshot_csv(const thermo::ThermoClosure& closure, const solver::Grid1D& grid,
                         double t, const solver::Primitives& prim) {
  std::string out = kSnapshotHeader;
  out += '\n';
  const std::string ts = format_double(t);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double rho = prim.rho[i];
    const double th = prim.theta[i];
    const thermo::EosEval ev = thermo::eos_eval(closure, {rho, th});
    out += ts;
    for (double v : {grid.x(i), rho, prim.u[i], th, ev.p, thermo::scaled_temperature(closure, th),
                     ev.s}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

diagnostics::Frame parse_snapshot_csv(const thermo::ThermoClosure& closure,
                                      const solver::Grid1D& grid, const std::string& text,
                                      const std::string& origin) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != kSnapshotHeader) {
    throw IoError(origin + ": missing header '" + kSnapshotHeader + "'");
  }
  std::vector<double> rho, u, theta;
  double t = 0.0;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 8) {
      throw IoError(origin + ":" + std::to_string(lineno) + ": expected 8 fields");
    }
    const double row_t = parse_double(f[0], origin, lineno);
    const std::size_t i = rho.size();
    if (i == 0) t = row_t;
    if (row_t != t) throw IoError(origin + ":" + std::to_string(lineno) + ": time changes");
    if (i >= grid.size()) throw IoError(origin + ": more rows than grid cells");
    const double x = parse_double(f[1], origin, lineno);
    if (std::abs(x - grid.x(i)) > 1e-12 * grid.length()) {
      throw IoError(origin + ":" + std::to_string(lineno) + ": x does not match the grid");
    }
    rho.push_back(parse_double(f[2], origin, lineno));
    u.push_back(parse_double(f[3], origin, lineno));
    theta.push_back(parse_double(f[4], origin, lineno));
  }
  if (rho.size() != grid.size()) {
    throw IoError(origin + ": " + std::to_string(rho.size()) + " rows for a grid of " +
                  std::to_string(grid.size()) + " cells");
  }
  diagnostics::Frame frame;
  frame.t = t;
  frame.prim = solver::primitives_from_fields(closure, std::move(rho), std::move(u), std::move(theta));
  return frame;
}

std::string manifest_json(const Manifest& m) {
  ojson j;
  j["format_version"] = m.format_version;
  j["tool_version"] = m.tool_version;
  j["config_hash"] = m.config_hash;
  j["scenario"] = m.scenario;
  j["stop_reason"] = m.stop_reason;
  j["stop_detail"] = m.stop_detail;
  j["stop_time"] = m.stop_time;
  ojson snaps = ojson::array();
  for (const SnapshotEntry& s : m.snapshots) {
    snaps.push_back({{"t", s.t},
                     {"file", s.file},
                     {"injected", {s.injected[0], s.injected[1], s.injected[2]}}});
  }
  j["snapshots"] = std::move(snaps);
  return j.dump(2) + "\n";
}

Manifest parse_manifest(const std::string& text) {
  const auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw IoError("manifest is not a JSON object");
  Manifest m;
  try {
    m.format_version = j.at("format_version").get<int>();
    if (m.format_version != kManifestFormatVersion) {
      throw IoError("manifest format version " + std::to_string(m.format_version) +
                    " is not supported (expected " + std::to_string(kManifestFormatVersion) + ")");
    }
    m.tool_version = j.at("tool_version").get<std::string>();
    m.config_hash = j.at("config_hash").get<std::string>();
    m.scenario = j.at("scenario").get<std::string>();
    m.stop_reason = j.at("stop_reason").get<std::string>();
    m.stop_detail = j.at("stop_detail").get<std::string>();
    m.stop_time = j.at("stop_time").get<double>();
    for (const auto& s : j.at("snapshots")) {
      SnapshotEntry e;
      e.t = s.at("t").get<double>();
      e.file = s.at("file").get<std::string>();
      const auto& inj = s.at("injected");
      for (std::size_t k = 0; k < 3; ++k) e.injected[k] = inj.at(k).get<double>();
      m.snapshots.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

std::string report_csv(const diagnostics::DiagnosticsReport& report) {
  std::string out = kReportHeader;
  out += '\n';
  for (const diagnostics::ReportRow& r : report.rows) {
    for (double v : {r.t, r.mass, r.energy, r.entropy, r.sigma_total, r.sigma_min, r.grad_u_inf,
                     r.div_u_inf, r.sobolev[0], r.sobolev[1], r.sobolev[2], r.xi_lower,
                     r.rho_lower, r.rho_upper, r.xi_upper}) {
      out += format_double(v);
      out += ',';
    }
    if (r.rel_entropy) out += format_double(*r.rel_entropy);
    out += ',';
    if (r.rei_residual) out += format_double(*r.rei_residual);
    out += ',';
    out += r.stop_reason;
    out += '\n';
  }
  return out;
}

std::string summary_json(const diagnostics::DiagnosticsReport& report) {
  const diagnostics::ReportSummary& s = report.summary;
  ojson j;
  j["stop_reason"] = s.stop_reason;
  j["verdicts"] = {{"conservation", s.conservation_ok},
                   {"sigma_nonnegative", s.sigma_nonnegative},
                   {"entropy_inequality", opt(s.entropy_inequality_ok)},
                   {"envelopes_contained", s.envelopes_contained},
                   {"monitor_exceeded", s.monitor_exceeded},
                   {"relative_entropy_inequality", opt(s.rei_ok)},
                   {"gronwall_envelope",
                    s.gronwall ? ojson(s.gronwall->within) : ojson(nullptr)}};
  j["conservation"] = {{"mass_drift", s.mass_drift}, {"energy_drift", s.energy_drift}};
  j["entropy"] = {{"sigma_min", finite_or_null(s.sigma_min)},
                  {"sigma_max", s.sigma_max},
                  {"delta_entropy", s.entropy.delta_entropy},
                  {"production", s.entropy.production},
                  {"residual", s.entropy.residual},
                  {"tol_disc", s.entropy.tol_disc}};
  j["suprema"] = {{"grad_u_inf_initial", s.grad_u_initial},
                  {"grad_u_inf_max", s.grad_u_max},
                  {"B_sup", s.b_sup},
                  {"B_inf", finite_or_null(s.b_inf)},
                  {"D_sup", s.d_sup},
                  {"A_sup", s.a_sup}};
  j["envelopes"] = {{"tol", s.envelope_tol}, {"violation", s.envelope_violation}};
  j["relative_entropy_inequality"] = {{"min_margin", opt(s.rei_min_margin)},
                                      {"tol_disc", opt(s.rei_tol_disc)}};
  ojson gw = nullptr;
  if (s.gronwall) {
    gw = {{"chi_hat", s.gronwall->chi_hat},   {"horizon", s.gronwall->horizon},
          {"bound", s.gronwall->bound},       {"max_ratio", s.gronwall->max_ratio},
          {"fitted_rate", s.gronwall->fitted_rate}};
  }
  j["gronwall"] = {{"gap_max", opt(s.gap_max)}, {"envelope", gw}};
  return j.dump(2) + "\n";
}

}  // namespace nsf::io
