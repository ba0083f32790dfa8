#include "wattmark/power/sampler.hpp"

#include <spdlog/spdlog.h>

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "wattmark/errors.hpp"

namespace wattmark::power {

Clock::duration interval_from_seconds(double interval_s) {
  if (!(interval_s > 0.0) || !std::isfinite(interval_s)) {
    throw ContractViolation("sample interval must be positive, got " +
                            std::to_string(interval_s));
  }
  const auto ns = std::llround(interval_s * 1e9);
  if (ns <= 0) throw ContractViolation("sample interval below clock resolution");
  return Clock::duration{ns};
}

struct SamplingSession::State {
  std::shared_ptr<TelemetryBackend> backend;
  std::shared_ptr<Clock> clock;
  Clock::duration interval;
  Clock::duration start;
  PowerTrace trace;
  std::atomic<std::size_t> skipped{0};
  bool sealed = false;
  std::jthread worker;

  State(std::shared_ptr<TelemetryBackend> b, std::shared_ptr<Clock> c, const SamplingOptions& o)
      : backend(std::move(b)),
        clock(std::move(c)),
        interval(interval_from_seconds(o.interval_s)),
        start(clock->now()),
        trace(o.trial_id, o.interval_s) {}

  std::int64_t elapsed_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(clock->now() - start).count();
  }

  // Returns false and tallies the failure when the read is unusable.
  bool take_sample() {
    const auto at = elapsed_ms();
    try {
      const double watts = backend->read_watts();
      if (!std::isfinite(watts) || watts <= 0.0) {
        throw TelemetryError("backend returned non-positive reading " + std::to_string(watts));
      }
      trace.append({at, watts});
      return true;
    } catch (const TelemetryError& e) {
      const auto n = ++skipped;
      spdlog::warn("[{}] power read at {} ms skipped ({} so far): {}", trace.trial_id(), at, n,
                   e.what());
      return false;
    }
  }

  void run(std::stop_token stop) {
    std::int64_t tick = 1;
    while (clock->sleep_until(start + tick * interval, stop)) {
      take_sample();
      const auto late = (clock->now() - start) / interval;
      tick = std::max<std::int64_t>(tick + 1, late + 1);
    }
  }
};

SamplingSession::SamplingSession(std::shared_ptr<TelemetryBackend> backend,
                                 std::shared_ptr<Clock> clock, SamplingOptions options) {
  if (!backend) throw ContractViolation("sampling needs a telemetry backend");
  if (!clock) throw ContractViolation("sampling needs a clock");
  state_ = std::make_unique<State>(std::move(backend), std::move(clock), options);

  // Startup sample, taken before the worker exists.
  const auto at = state_->elapsed_ms();
  try {
    const double watts = state_->backend->read_watts();
    if (!std::isfinite(watts) || watts <= 0.0) {
      throw TelemetryError("backend returned non-positive reading " + std::to_string(watts));
    }
    state_->trace.append({at, watts});
  } catch (const TelemetryError& e) {
    if (options.abort_on_startup_failure) {
      throw TelemetryError("startup power sample failed for '" + options.trial_id +
                           "': " + e.what());
    }
    ++state_->skipped;
    spdlog::warn("[{}] startup power read failed: {}", options.trial_id, e.what());
  }
  state_->worker = std::jthread([s = state_.get()](std::stop_token st) { s->run(st); });
}

SamplingSession::~SamplingSession() = default;
SamplingSession::SamplingSession(SamplingSession&&) noexcept = default;
SamplingSession& SamplingSession::operator=(SamplingSession&&) noexcept = default;

PowerTrace SamplingSession::stop_and_seal() {
  if (!state_) throw ContractViolation("sampling session was moved from");
  if (state_->sealed) throw AlreadySealedError("sampling session already sealed");
  if (state_->worker.joinable()) {
    state_->worker.request_stop();
    state_->worker.join();
  }
  state_->sealed = true;
  state_->trace.seal();
  return state_->trace;
}

std::int64_t SamplingSession::elapsed_ms() const { return state_->elapsed_ms(); }

std::size_t SamplingSession::skipped_reads() const { return state_->skipped.load(); }

bool SamplingSession::active() const { return state_ && !state_->sealed; }

SamplingSession start_sampling(std::shared_ptr<TelemetryBackend> backend,
                               std::shared_ptr<Clock> clock, SamplingOptions options) {
  return SamplingSession(std::move(backend), std::move(clock), std::move(options));
}

}  // namespace wattmark::power
