#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>

#include "wattmark/power/clock.hpp"
#include "wattmark/power/power_trace.hpp"
#include "wattmark/power/telemetry.hpp"

namespace wattmark::power {

inline constexpr double kDefaultSampleIntervalS = 60.0;

struct SamplingOptions {
  double interval_s = kDefaultSampleIntervalS;
  std::string trial_id = "trial";
  /// When false a failed startup read is tallied like any other transient
  /// failure instead of aborting. Sealing then fails if nothing was collected.
  bool abort_on_startup_failure = true;
};

/// A running background sampler for one trial.
///
/// Construction takes the startup sample on the calling thread, then a worker
/// thread reads the backend at start + k * interval for k = 1, 2, ... Missed
/// ticks are skipped rather than bunched. Transient read failures after
/// startup are logged and counted. The worker is the only writer of the
/// trace; stop_and_seal() joins it before the trace is exposed.
///
/// Not copyable and not meant to be shared between threads.
class SamplingSession {
 public:
  SamplingSession(std::shared_ptr<TelemetryBackend> backend, std::shared_ptr<Clock> clock,
                  SamplingOptions options);
  ~SamplingSession();

  SamplingSession(SamplingSession&&) noexcept;
  SamplingSession& operator=(SamplingSession&&) noexcept;
  SamplingSession(const SamplingSession&) = delete;
  SamplingSession& operator=(const SamplingSession&) = delete;

  /// Stops the worker and returns the sealed trace. A second call throws
  /// AlreadySealedError; an empty trace throws InvalidTraceError.
  PowerTrace stop_and_seal();

  /// Milliseconds since the startup sample on the session's clock.
  std::int64_t elapsed_ms() const;
  /// Read failures skipped so far (final once sealed).
  std::size_t skipped_reads() const;
  bool active() const;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

/// Starts sampling; throws TelemetryError if the startup read fails.
SamplingSession start_sampling(std::shared_ptr<TelemetryBackend> backend,
                               std::shared_ptr<Clock> clock, SamplingOptions options);

/// Interval in seconds to clock ticks, rejecting non-positive values.
Clock::duration interval_from_seconds(double interval_s);

}  // namespace wattmark::power
