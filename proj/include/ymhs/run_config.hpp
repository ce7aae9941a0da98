// Experiment configuration (JSON), thresholds table and output location.
#pragma once

#include "ymhs/flow_engine.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ymhs {

using json = nlohmann::ordered_json;

/// Invalid configuration; `field` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)), message_(message) {}
  const std::string& field() const { return field_; }
  const std::string& message() const { return message_; }

  /// Single-line, machine-readable rendering.
  std::string to_line() const;

 private:
  std::string field_;
  std::string message_;
};

/// Pass/fail thresholds shared by every subcommand and the acceptance suite.
class Thresholds {
 public:
  static constexpr const char* kVersion = "ymhs-thresholds/1";

  static Thresholds defaults();

  double operator[](const std::string& key) const;
  void set(const std::string& key, double value);
  const std::map<std::string, double>& values() const { return values_; }

  /// `key=value` pairs in key order, prefixed by the table version.
  std::string describe() const;

 private:
  std::map<std::string, double> values_;
};

struct RunConfig {
  int n = 64;
  FlowSystem system = FlowSystem::ymhs;
  double epsilon = 0;
  std::optional<double> dt;  // nullopt: "auto", the explicit-step bound
  double T = 0.1;
  std::string preset = "twist";
  double preset_a = 0.3;
  long report_interval = 1;  // in steps
  int k_max = 3;
  std::string output = "ymhs_out";
  std::uint64_t seed = 1;
  double cfl_safety = 0.2;
  bool snapshots = false;
  bool gauge_ode = true;
  std::vector<double> epsilons{0.2, 0.1, 0.05, 0.025};  // epsilon study
  int halvings = 3;                                     // time study
  Thresholds thresholds = Thresholds::defaults();
};

/// Parses and validates; unknown keys are rejected.
RunConfig parse_run_config(const json& j);
RunConfig load_run_config(const std::filesystem::path& path);

/// dt with "auto" resolved to cfl_limit(grid, epsilon, cfl_safety).
double resolve_dt(const RunConfig& c);

FlowConfig<double> flow_config(const RunConfig& c);

/// Fully resolved echo of the configuration.
json to_json(const RunConfig& c);

/// `YMHS_OUT` if set and non-empty, else the configured directory.
std::filesystem::path output_dir(const RunConfig& c);

}  // namespace ymhs
