#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "wattmark/power/telemetry.hpp"

namespace wattmark::orchestrator {

/// Raw key/value settings in the order they were applied. Later sources
/// override earlier ones: file, then WATTMARK_* environment, then flags.
using Settings = std::map<std::string, std::string>;

/// Synthetic device model used when `backend = synthetic`. Trial duration and
/// power level both grow with the trial's token exposure (millions of tokens):
///   duration_s = seconds_per_mtoken * tt_tokens * (1 + duration_jitter * z)
///   level_w    = base_watts + watts_per_mtoken * tt_tokens
struct SyntheticProfile {
  double base_watts = 150.0;
  double watts_per_mtoken = 4.0;
  double noise_watts = 2.0;
  double seconds_per_mtoken = 400.0;
  double duration_jitter = 0.02;
  double read_failure_rate = 0.0;
};

struct ExperimentConfig {
  std::vector<std::int64_t> conditions;  ///< token targets, declared order
  int trials_per_condition = 50;
  int epochs = 3;
  double sample_interval_s = 60.0;

  power::BackendKind backend = power::BackendKind::synthetic;
  unsigned device_index = 0;
  std::filesystem::path replay_dir;
  SyntheticProfile synthetic;

  /// Shell command with {target_tokens}, {epochs}, {seed}, {sidecar_path}.
  std::string workload;

  double cs_tflops = 0.0;
  double k_norm = 1.0;
  double tt_scale = 1.0;
  double baseline_pe = 1.0;
  double alpha = 0.05;

  std::filesystem::path output_dir = "wattmark-out";
  std::filesystem::path results;  ///< defaults to output_dir/results.jsonl
  std::uint64_t seed = 0;

  std::filesystem::path results_path() const;
  std::string condition_label(std::size_t condition_index) const;
};

/// Every recognised key with a one-line description, in documentation order.
const std::vector<std::pair<std::string, std::string>>& config_keys();

/// Parses `key = value` lines; `#` starts a comment. Throws ConfigError.
Settings parse_settings(std::istream& in, const std::string& source_name);
Settings load_settings_file(const std::filesystem::path& path);

/// Adds WATTMARK_<KEY> overrides found in the environment.
void apply_environment(Settings& settings);

/// Validates and converts. Paths are used as given (relative to the working directory).
ExperimentConfig config_from_settings(const Settings& settings);

void validate(const ExperimentConfig& config);

/// Per-trial seed derived from the experiment seed.
std::uint64_t trial_seed(std::uint64_t experiment_seed, std::size_t condition_index,
                         std::size_t trial_index);

/// "<target>_<trial:03>", e.g. "500000_007".
std::string trial_id(std::int64_t target_tokens, std::size_t trial_index);

}  // namespace wattmark::orchestrator
