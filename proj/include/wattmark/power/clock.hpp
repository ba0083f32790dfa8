#pragma once

#include <chrono>
#include <condition_variable>
#include <mutex>
#include <stop_token>

namespace wattmark::power {

/// Time source for the sampler.
///
/// Times are offsets on the clock's own monotonic axis. `sleep_until` returns
/// true once `deadline` is reached and false if the stop token fired first.
class Clock {
 public:
  using duration = std::chrono::nanoseconds;

  virtual ~Clock() = default;
  virtual duration now() const = 0;
  virtual bool sleep_until(duration deadline, std::stop_token stop) = 0;

  /// Blocks until the clock has advanced as far as it ever will on its own.
  /// Wall clocks return immediately; simulated clocks run to their horizon
  /// and wait for the sleeper to park there.
  virtual void settle() {}
};

/// std::chrono::steady_clock, interruptible sleeps.
class SteadyClock final : public Clock {
 public:
  duration now() const override;
  bool sleep_until(duration deadline, std::stop_token stop) override;

 private:
  std::mutex mutex_;
  std::condition_variable_any cv_;
};

/// Virtual time for replayed and synthetic trials and for tests.
///
/// Time stays at zero until `settle()` releases it. After that every sleep
/// whose deadline is within the horizon returns immediately with the clock
/// set to the deadline; the first sleep past the horizon parks until stopped.
/// With a single sleeper this yields exactly floor(horizon / interval) + 1
/// samples, independent of host scheduling.
class SimulatedClock final : public Clock {
 public:
  explicit SimulatedClock(duration horizon);

  duration now() const override;
  bool sleep_until(duration deadline, std::stop_token stop) override;
  void settle() override;

  duration horizon() const noexcept { return horizon_; }

 private:
  const duration horizon_;
  mutable std::mutex mutex_;
  std::condition_variable_any cv_;
  duration now_{0};
  bool released_ = false;
  bool parked_ = false;
};

}  // namespace wattmark::power
