#include "wattmark/orchestrator/telemetry_factory.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "wattmark/errors.hpp"
#include "wattmark/metrics/efficiency.hpp"
#include "wattmark/power/sampler.hpp"
#include "wattmark/power/trace_csv.hpp"

namespace wattmark::orchestrator {

double synthetic_duration_s(const SyntheticProfile& p, double tt_tokens, double z) {
  return std::max(0.0, p.seconds_per_mtoken * tt_tokens * (1.0 + p.duration_jitter * z));
}

TrialTelemetry make_default_telemetry(const ExperimentConfig& config, const TrialContext& trial) {
  using power::Clock;
  const auto interval = power::interval_from_seconds(config.sample_interval_s);

  switch (config.backend) {
    case power::BackendKind::live:
      return {std::make_shared<power::NvmlBackend>(config.device_index),
              std::make_shared<power::SteadyClock>()};

    case power::BackendKind::replay: {
      const auto path = config.replay_dir / (trial.trial_id + ".csv");
      if (!std::filesystem::exists(path)) {
        throw TelemetryError("no replay trace for trial '" + trial.trial_id + "' at " +
                             path.string());
      }
      auto recorded = power::read_trace_csv(path, trial.trial_id, config.sample_interval_s);
      std::vector<power::PowerSample> samples(recorded.samples().begin(),
                                              recorded.samples().end());
      auto clock = std::make_shared<power::SimulatedClock>(
          power::ReplayBackend::horizon_for(samples, interval));
      auto backend =
          std::make_shared<power::ReplayBackend>(std::move(samples), clock, path.string());
      return {std::move(backend), std::move(clock)};
    }

    case power::BackendKind::synthetic: {
      const auto& p = config.synthetic;
      const double tt =
          metrics::token_exposure(trial.target_tokens, config.epochs, config.tt_scale).tt_tokens;
      std::mt19937_64 rng(trial.seed ^ 0x5EEDC0FFEEULL);
      const double z = std::normal_distribution<double>(0.0, 1.0)(rng);
      const double seconds = synthetic_duration_s(p, tt, z);
      const auto horizon = std::chrono::duration_cast<Clock::duration>(
          std::chrono::duration<double>(seconds));
      power::SyntheticDevice device{.level_watts = p.base_watts + p.watts_per_mtoken * tt,
                                    .noise_watts = p.noise_watts,
                                    .read_failure_rate = p.read_failure_rate};
      return {std::make_shared<power::SyntheticBackend>(device, rng()),
              std::make_shared<power::SimulatedClock>(horizon)};
    }
  }
  throw ConfigError("unknown backend");
}

}  // namespace wattmark::orchestrator
