#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dmslice {

/// Bad configuration.  `field` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error("field `" + field + "`: " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// An exact invariant failed inside a run.  Always a bug.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// One run, read from "key = value" lines ('#' starts a comment).
struct ExperimentConfig {
  std::map<std::string, std::string> entries;
  std::string base_dir = ".";  // relative input paths resolve here

  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);

  bool has(const std::string& key) const { return entries.count(key) != 0; }
  std::string get(const std::string& key, const std::string& fallback = "") const;
  std::string require(const std::string& key) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::string experiment() const { return require("experiment"); }
};

struct ExperimentInfo {
  std::string name;
  std::string description;
};
const std::vector<ExperimentInfo>& experiment_kinds();

enum ExitCode : int { exit_ok = 0, exit_claim_failed = 1, exit_config = 2, exit_invariant = 3 };

struct RunResult {
  int exit_code = exit_ok;
  std::string summary_json;
  std::string detail_csv;
  /// Further tables keyed by file name (points.csv for kept rows).
  std::map<std::string, std::string> extra_files;
};

/// Runs one experiment.  `seed` overrides the config seed when set.  Throws
/// ConfigError or InvariantError.
RunResult run_experiment(const ExperimentConfig& config, std::optional<std::uint64_t> seed = std::nullopt);

/// Writes summary.json and detail.csv into `out_dir` (created if missing).
void write_outputs(const RunResult& result, const std::string& out_dir);

}  // namespace dmslice
