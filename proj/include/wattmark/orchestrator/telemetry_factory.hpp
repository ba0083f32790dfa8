#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "wattmark/orchestrator/config.hpp"
#include "wattmark/power/clock.hpp"
#include "wattmark/power/telemetry.hpp"

namespace wattmark::orchestrator {

struct TrialContext {
  std::size_t condition_index = 0;
  std::size_t trial_index = 0;
  std::int64_t target_tokens = 0;
  std::string trial_id;
  std::uint64_t seed = 0;
};

/// Backend and clock for one trial. Replay and synthetic trials run on a
/// SimulatedClock whose horizon is the trial's (recorded or modelled) length.
struct TrialTelemetry {
  std::shared_ptr<power::TelemetryBackend> backend;
  std::shared_ptr<power::Clock> clock;
};

using TelemetryFactory = std::function<TrialTelemetry(const ExperimentConfig&, const TrialContext&)>;

/// live: NVML + steady clock. replay: <replay_dir>/<trial_id>.csv.
/// synthetic: the config's SyntheticProfile, seeded from the trial seed.
TrialTelemetry make_default_telemetry(const ExperimentConfig& config, const TrialContext& trial);

/// Modelled length of a synthetic trial in seconds.
double synthetic_duration_s(const SyntheticProfile& profile, double tt_tokens, double z);

}  // namespace wattmark::orchestrator
