#include "nsf/config.hpp"

#include "nsf/diagnostics.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

namespace nsf::config {
namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Walks one JSON object, remembering which keys were read so the rest can be rejected.
class ObjectReader {
public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_, "expected an object");
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  std::string child(const std::string& key) const { return path_ + "." + key; }

  std::optional<double> number(const std::string& key) {
    const json* v = find(key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number()) throw ConfigError(child(key), "expected a number");
    const double d = v->get<double>();
    if (!std::isfinite(d)) throw ConfigError(child(key), "must be finite");
    return d;
  }

  std::optional<std::string> string(const std::string& key) {
    const json* v = find(key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_string()) throw ConfigError(child(key), "expected a string");
    return v->get<std::string>();
  }

  std::optional<std::uint64_t> unsigned_integer(const std::string& key) {
    const json* v = find(key);
    if (v == nullptr) return std::nullopt;
    if (v->is_number_unsigned()) return v->get<std::uint64_t>();
    if (v->is_number_integer()) throw ConfigError(child(key), "must be nonnegative");
    if (v->is_number_float()) {
      const double d = v->get<double>();
      if (d >= 0.0 && d == std::floor(d) && d < 9.0e15) return static_cast<std::uint64_t>(d);
    }
    throw ConfigError(child(key), "expected a nonnegative integer");
  }

  std::optional<ObjectReader> object(const std::string& key) {
    const json* v = find(key);
    if (v == nullptr) return std::nullopt;
    return ObjectReader(*v, child(key));
  }

  void reject_unknown() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) throw ConfigError(child(key), "unknown key");
    }
  }

private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

double positive(std::optional<double> v, double fallback, const std::string& path) {
  if (!v) return fallback;
  if (!(*v > 0.0)) throw ConfigError(path, "must be positive");
  return *v;
}

double nonnegative(std::optional<double> v, double fallback, const std::string& path) {
  if (!v) return fallback;
  if (!(*v >= 0.0)) throw ConfigError(path, "must be nonnegative");
  return *v;
}

/// Top-level shorthand and its nested counterpart may not both be present.
std::optional<double> pick(std::optional<double> nested, std::optional<double> top,
                           const std::string& nested_path) {
  if (nested && top) throw ConfigError(nested_path, "given both here and as a top-level shorthand");
  return nested ? nested : top;
}

}  // namespace

void apply_override(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("", "override '" + std::string(assignment) + "' is not of the form key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));

  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  if (!doc.is_object()) throw ConfigError("", "expected an object");
  json* node = &doc;
  std::string path;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError(path, "override key '" + key + "' has an empty component");
    path += "." + part;
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    json& next = (*node)[part];
    if (next.is_null()) next = json::object();
    if (!next.is_object()) throw ConfigError(path, "override descends into a non-object");
    node = &next;
    start = dot + 1;
  }
}

RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("", "not a valid JSON document");
  return parse_config_json(std::move(doc), overrides);
}

RunConfig parse_config_json(json doc, const std::vector<std::string>& overrides) {
  for (const std::string& o : overrides) apply_override(doc, o);

  RunConfig cfg;
  ObjectReader root(doc, "");

  const auto scenario = root.string("scenario");
  if (!scenario) throw ConfigError(".scenario", "required");
  if (!scenarios::is_known(*scenario)) {
    throw ConfigError(".scenario",
                      "unknown scenario '" + *scenario + "'; known: " + scenarios::known_ids());
  }
  cfg.scenario = *scenario;
  const scenarios::ScenarioDefaults& preset = scenarios::defaults(cfg.scenario);

  const auto top_n = root.find("N");
  const auto top_l = root.number("L");
  const auto top_t_end = root.number("t_end");
  const auto top_output_dt = root.number("output_dt");

  ClosureConfig& cl = cfg.closure;
  if (preset.mu0 > 0.0) cl.mu0 = preset.mu0;
  if (preset.kappa0 > 0.0) cl.kappa0 = preset.kappa0;
  if (auto r = root.object("closure")) {
    if (auto kind = r->string("kind")) {
      try {
        thermo::closure_kind_from_string(*kind);
      } catch (const std::exception&) {
        throw ConfigError(r->child("kind"),
                          "unknown closure '" + *kind +
                              "'; known: ideal-gas-radiative, hard-sphere-compliant");
      }
      cl.kind = *kind;
    }
    cl.a = nonnegative(r->number("a"), cl.a, r->child("a"));
    if (auto v = r->number("entropy_offset")) cl.entropy_offset = *v;
    cl.mu0 = positive(r->number("mu0"), cl.mu0, r->child("mu0"));
    if (auto v = r->number("Lambda")) {
      if (!(*v > 0.4 && *v <= 1.0)) throw ConfigError(r->child("Lambda"), "must lie in (2/5, 1]");
      cl.lambda = *v;
    }
    cl.kappa0 = positive(r->number("kappa0"), cl.kappa0, r->child("kappa0"));
    cl.c_inf = positive(r->number("C_inf"), cl.c_inf, r->child("C_inf"));
    r->reject_unknown();
  }

  std::optional<std::uint64_t> n;
  std::optional<double> length;
  if (auto r = root.object("grid")) {
    n = r->unsigned_integer("N");
    length = r->number("L");
    r->reject_unknown();
  }
  if (top_n != nullptr) {
    if (n) throw ConfigError(".grid.N", "given both here and as a top-level shorthand");
    json wrapper = {{"N", *top_n}};
    ObjectReader tmp(wrapper, ".grid");
    n = tmp.unsigned_integer("N");
  }
  if (n) {
    if (*n < 8) throw ConfigError(".grid.N", "must be at least 8");
    if (*n > (1u << 20)) throw ConfigError(".grid.N", "must be at most 1048576");
    cfg.n = static_cast<std::size_t>(*n);
  }
  if (length && top_l) throw ConfigError(".grid.L", "given both here and as a top-level shorthand");
  cfg.length = positive(length ? length : top_l, cfg.length, ".grid.L");

  cfg.t_end = preset.t_end;
  cfg.output_dt = preset.output_dt;
  std::optional<double> t_end, output_dt;
  if (auto r = root.object("time")) {
    t_end = r->number("t_end");
    output_dt = r->number("output_dt");
    cfg.cfl_adv = positive(r->number("CFL_adv"), cfg.cfl_adv, r->child("CFL_adv"));
    cfg.cfl_diff = positive(r->number("CFL_diff"), cfg.cfl_diff, r->child("CFL_diff"));
    r->reject_unknown();
  }
  cfg.t_end = positive(pick(t_end, top_t_end, ".time.t_end"), cfg.t_end, ".time.t_end");
  cfg.output_dt =
      positive(pick(output_dt, top_output_dt, ".time.output_dt"), cfg.output_dt, ".time.output_dt");
  if (cfg.cfl_adv > 1.0) throw ConfigError(".time.CFL_adv", "must not exceed 1");
  if (cfg.cfl_diff > 0.5) throw ConfigError(".time.CFL_diff", "must not exceed 0.5");

  cfg.g_threshold = preset.g_threshold;
  if (auto r = root.object("monitor")) {
    const json* g = r->find("G_threshold");
    if (g != nullptr && g->is_null()) {
      cfg.g_threshold = kInf;
    } else if (g != nullptr) {
      if (!g->is_number() || !(g->get<double>() > 0.0)) {
        throw ConfigError(r->child("G_threshold"), "must be a positive number or null");
      }
      cfg.g_threshold = g->get<double>();
    }
    r->reject_unknown();
  }

  cfg.limiter = preset.limiter == solver::Limiter::None ? "none" : "minmod";
  if (auto r = root.object("solver")) {
    if (auto lim = r->string("limiter")) {
      if (*lim != "minmod" && *lim != "none") {
        throw ConfigError(r->child("limiter"), "unknown limiter '" + *lim + "'; known: minmod, none");
      }
      cfg.limiter = *lim;
    }
    r->reject_unknown();
  }

  if (auto r = root.object("diagnostics")) {
    const json* trio = r->find("trio");
    if (trio != nullptr && !trio->is_null()) {
      if (!trio->is_string()) throw ConfigError(r->child("trio"), "expected a string or null");
      const auto id = trio->get<std::string>();
      if (!diagnostics::is_known_trio(id)) {
        throw ConfigError(r->child("trio"), "unknown test trio '" + id + "'; known: " +
                                                diagnostics::known_trio_ids());
      }
      cfg.trio = id;
    }
    const json* ref = r->find("reference_run");
    if (ref != nullptr && !ref->is_null()) {
      if (!ref->is_string() || ref->get<std::string>().empty()) {
        throw ConfigError(r->child("reference_run"), "expected a non-empty path or null");
      }
      cfg.reference_run = ref->get<std::string>();
    }
    r->reject_unknown();
  }

  if (auto r = root.object("perturbation")) {
    if (auto e = r->number("epsilon")) {
      if (!(std::abs(*e) < 0.5)) throw ConfigError(r->child("epsilon"), "must satisfy |epsilon| < 0.5");
      cfg.epsilon = *e;
    }
    if (auto s = r->unsigned_integer("seed")) cfg.seed = *s;
    r->reject_unknown();
  }

  if (auto r = root.object("output")) {
    if (auto d = r->string("dir")) {
      if (d->empty()) throw ConfigError(r->child("dir"), "must not be empty");
      cfg.output_dir = *d;
    }
    r->reject_unknown();
  }

  root.reject_unknown();
  return cfg;
}

nlohmann::ordered_json to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["scenario"] = cfg.scenario;
  j["closure"] = {{"kind", cfg.closure.kind},     {"a", cfg.closure.a},
                  {"entropy_offset", cfg.closure.entropy_offset},
                  {"mu0", cfg.closure.mu0},       {"Lambda", cfg.closure.lambda},
                  {"kappa0", cfg.closure.kappa0}, {"C_inf", cfg.closure.c_inf}};
  j["grid"] = {{"N", cfg.n}, {"L", cfg.length}};
  j["time"] = {{"t_end", cfg.t_end},
               {"output_dt", cfg.output_dt},
               {"CFL_adv", cfg.cfl_adv},
               {"CFL_diff", cfg.cfl_diff}};
  j["monitor"]["G_threshold"] =
      std::isinf(cfg.g_threshold) ? nlohmann::ordered_json(nullptr)
                                  : nlohmann::ordered_json(cfg.g_threshold);
  j["solver"] = {{"limiter", cfg.limiter}};
  j["diagnostics"]["trio"] =
      cfg.trio ? nlohmann::ordered_json(*cfg.trio) : nlohmann::ordered_json(nullptr);
  j["diagnostics"]["reference_run"] =
      cfg.reference_run ? nlohmann::ordered_json(*cfg.reference_run)
                        : nlohmann::ordered_json(nullptr);
  j["perturbation"] = {{"epsilon", cfg.epsilon}, {"seed", cfg.seed}};
  j["output"] = {{"dir", cfg.output_dir}};
  return j;
}

std::string emit(const RunConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::ostringstream os;
  os << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) os << std::setw(2) << static_cast<int>(digest[i]);
  return os.str();
}

std::string config_hash(const RunConfig& cfg) {
  RunConfig copy = cfg;
  copy.output_dir.clear();
  return sha256_hex(emit(copy));
}

thermo::ClosureParams closure_params(const RunConfig& cfg) {
  thermo::ClosureParams p;
  p.kind = thermo::closure_kind_from_string(cfg.closure.kind);
  p.a = cfg.closure.a;
  p.entropy_offset = cfg.closure.entropy_offset;
  p.mu0 = cfg.closure.mu0;
  p.lambda = cfg.closure.lambda;
  p.kappa0 = cfg.closure.kappa0;
  return p;
}

thermo::ThermoClosure make_closure(const RunConfig& cfg) {
  const thermo::ClosureParams p = closure_params(cfg);
  if (p.kind == thermo::ClosureKind::IdealGasRadiative) return thermo::make_ideal_gas_radiative(p);
  thermo::CompliantParams grid;
  grid.c_inf = cfg.closure.c_inf;
  return thermo::build_compliant_closure(p, grid);
}

solver::Limiter limiter(const RunConfig& cfg) {
  return cfg.limiter == "none" ? solver::Limiter::None : solver::Limiter::Minmod;
}

scenarios::Perturbation perturbation(const RunConfig& cfg) { return {cfg.epsilon, cfg.seed}; }

}  // namespace nsf::config
