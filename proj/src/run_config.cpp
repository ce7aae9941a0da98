#include "ymhs/run_config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace ymhs {

std::string ConfigError::to_line() const {
  json j;
  j["error"] = "invalid_config";
  j["field"] = field_;
  j["message"] = message_;
  return j.dump();
}

Thresholds Thresholds::defaults() {
  Thresholds t;
  t.values_ = {
      {"adjoint_abs", 1e-12},
      {"commutator_order", 1.9},
      {"deturck_control_ratio", 10.0},
      {"deturck_order", 1.8},
      {"dissipation_rel", 1e-8},
      {"dissipation_slack", 1e-10},
      {"drift_order", 3.5},
      {"drift_rel", 1e-6},
      {"gauge_invariance_abs", 1e-12},
      {"gauge_order", 1.8},
      {"moment_abs", 1e-12},
      {"richardson_hi", 4.5},
      {"richardson_lo", 3.5},
      {"space_order", 1.9},
      {"stationary_abs", 1e-12},
      {"variational_rel", 1e-5},
      {"variational_step", 1e-5},
  };
  return t;
}

double Thresholds::operator[](const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw Error("unknown threshold '" + key + "'");
  return it->second;
}

void Thresholds::set(const std::string& key, double value) {
  if (!values_.contains(key)) throw ConfigError("thresholds." + key, "unknown threshold");
  if (!std::isfinite(value)) throw ConfigError("thresholds." + key, "must be finite");
  values_[key] = value;
}

std::string Thresholds::describe() const {
  std::ostringstream os;
  os << kVersion;
  for (const auto& [k, v] : values_) os << ' ' << k << '=' << json(v).dump();
  return os.str();
}

namespace {

const std::set<std::string> kKnownKeys{"grid",   "system",     "epsilon",   "dt",        "T",
                                       "preset", "preset_params", "report_interval", "k_max", "output",
                                       "seed",   "cfl_safety", "snapshots", "gauge_ode", "epsilons",
                                       "halvings", "thresholds"};

double get_number(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(key, "must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(key, "must be finite");
  return d;
}

long get_integer(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(key, "must be an integer");
  return v.get<long>();
}

}  // namespace

RunConfig parse_run_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config", "top level must be a JSON object");
  for (const auto& [k, v] : j.items())
    if (!kKnownKeys.contains(k)) throw ConfigError(k, "unknown key");

  RunConfig c;
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    long n = 0;
    if (g.is_object()) {
      if (!g.contains("N") || !g.at("N").is_number_integer()) throw ConfigError("grid.N", "must be an integer");
      n = g.at("N").get<long>();
    } else if (g.is_number_integer()) {
      n = g.get<long>();
    } else {
      throw ConfigError("grid", "must be an integer or {\"N\": integer}");
    }
    if (n < TorusGrid<double>::kMinPoints || n > 4096) throw ConfigError("grid.N", "must be in [8, 4096]");
    c.n = int(n);
  }
  if (j.contains("system")) {
    if (!j.at("system").is_string()) throw ConfigError("system", "must be a string");
    try {
      c.system = parse_system(j.at("system").get<std::string>());
    } catch (const Error& e) {
      throw ConfigError("system", e.what());
    }
  }
  if (j.contains("epsilon")) c.epsilon = get_number(j, "epsilon");
  if (j.contains("dt")) {
    const json& v = j.at("dt");
    if (v.is_string()) {
      if (v.get<std::string>() != "auto") throw ConfigError("dt", "must be a number or \"auto\"");
    } else {
      c.dt = get_number(j, "dt");
    }
  }
  if (j.contains("T")) c.T = get_number(j, "T");
  if (j.contains("preset")) {
    if (!j.at("preset").is_string()) throw ConfigError("preset", "must be a string");
    c.preset = j.at("preset").get<std::string>();
    if (c.preset != "pole" && c.preset != "twist") throw ConfigError("preset", "expected pole or twist");
  }
  if (j.contains("preset_params")) {
    const json& p = j.at("preset_params");
    if (!p.is_object()) throw ConfigError("preset_params", "must be an object");
    for (const auto& [k, v] : p.items())
      if (k != "a") throw ConfigError("preset_params." + k, "unknown preset parameter");
    if (p.contains("a")) {
      if (!p.at("a").is_number()) throw ConfigError("preset_params.a", "must be a number");
      c.preset_a = p.at("a").get<double>();
      if (!std::isfinite(c.preset_a) || std::abs(c.preset_a) > 0.45)
        throw ConfigError("preset_params.a", "must satisfy |a| <= 0.45");
    }
  }
  if (j.contains("report_interval")) {
    c.report_interval = get_integer(j, "report_interval");
    if (c.report_interval < 1) throw ConfigError("report_interval", "must be >= 1");
  }
  if (j.contains("k_max")) {
    const long k = get_integer(j, "k_max");
    if (k < 0 || k > kMaxHierarchyOrder) throw ConfigError("k_max", "must be in [0, 3]");
    c.k_max = int(k);
  }
  if (j.contains("output")) {
    if (!j.at("output").is_string() || j.at("output").get<std::string>().empty())
      throw ConfigError("output", "must be a non-empty string");
    c.output = j.at("output").get<std::string>();
  }
  if (j.contains("seed")) {
    const long s = get_integer(j, "seed");
    if (s < 0) throw ConfigError("seed", "must be >= 0");
    c.seed = std::uint64_t(s);
  }
  if (j.contains("cfl_safety")) c.cfl_safety = get_number(j, "cfl_safety");
  if (j.contains("snapshots")) {
    if (!j.at("snapshots").is_boolean()) throw ConfigError("snapshots", "must be a boolean");
    c.snapshots = j.at("snapshots").get<bool>();
  }
  if (j.contains("gauge_ode")) {
    if (!j.at("gauge_ode").is_boolean()) throw ConfigError("gauge_ode", "must be a boolean");
    c.gauge_ode = j.at("gauge_ode").get<bool>();
  }
  if (j.contains("epsilons")) {
    const json& e = j.at("epsilons");
    if (!e.is_array() || e.size() < 2) throw ConfigError("epsilons", "must be an array of at least two numbers");
    c.epsilons.clear();
    for (const auto& v : e) {
      if (!v.is_number() || !(v.get<double>() > 0)) throw ConfigError("epsilons", "entries must be numbers > 0");
      c.epsilons.push_back(v.get<double>());
    }
  }
  if (j.contains("halvings")) {
    const long h = get_integer(j, "halvings");
    if (h < 1 || h > 8) throw ConfigError("halvings", "must be in [1, 8]");
    c.halvings = int(h);
  }
  if (j.contains("thresholds")) {
    const json& t = j.at("thresholds");
    if (!t.is_object()) throw ConfigError("thresholds", "must be an object");
    for (const auto& [k, v] : t.items()) {
      if (!v.is_number()) throw ConfigError("thresholds." + k, "must be a number");
      c.thresholds.set(k, v.get<double>());
    }
  }

  // FlowConfig invariants, checked on the bare grid size before any field is built.
  try {
    validate(flow_config(c), TorusGrid<double>(c.n));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    const std::string what = e.what();
    const auto colon = what.find(": ");
    if (colon == std::string::npos) throw ConfigError("config", what);
    throw ConfigError(what.substr(0, colon), what.substr(colon + 2));
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config", "cannot open " + path.string());
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("JSON parse error: ") + e.what());
  }
  return parse_run_config(j);
}

double resolve_dt(const RunConfig& c) {
  if (c.dt) return *c.dt;
  if (!(c.cfl_safety > 0)) throw ConfigError("cfl_safety", "must be > 0");
  return cfl_limit(TorusGrid<double>(c.n), c.epsilon, c.cfl_safety);
}

FlowConfig<double> flow_config(const RunConfig& c) {
  FlowConfig<double> f;
  f.system = c.system;
  f.epsilon = c.epsilon;
  f.dt = resolve_dt(c);
  f.T = c.T;
  f.cfl_safety = c.cfl_safety;
  f.gauge_ode = c.gauge_ode;
  return f;
}

json to_json(const RunConfig& c) {
  json j;
  j["grid"] = {{"N", c.n}};
  j["system"] = to_string(c.system);
  j["epsilon"] = c.epsilon;
  j["dt"] = resolve_dt(c);
  j["dt_mode"] = c.dt ? "fixed" : "auto";
  j["T"] = c.T;
  j["preset"] = c.preset;
  j["preset_params"] = {{"a", c.preset_a}};
  j["report_interval"] = c.report_interval;
  j["k_max"] = c.k_max;
  j["output"] = c.output;
  j["seed"] = c.seed;
  j["cfl_safety"] = c.cfl_safety;
  j["snapshots"] = c.snapshots;
  j["gauge_ode"] = c.gauge_ode;
  j["epsilons"] = c.epsilons;
  j["halvings"] = c.halvings;
  return j;
}

std::filesystem::path output_dir(const RunConfig& c) {
  if (const char* env = std::getenv("YMHS_OUT"); env && *env) return env;
  return c.output;
}

}  // namespace ymhs
