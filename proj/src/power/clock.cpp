#include "wattmark/power/clock.hpp"

#include <algorithm>

namespace wattmark::power {

Clock::duration SteadyClock::now() const {
  return std::chrono::duration_cast<duration>(
      std::chrono::steady_clock::now().time_since_epoch());
}

bool SteadyClock::sleep_until(duration deadline, std::stop_token stop) {
  const auto wake = std::chrono::steady_clock::time_point(
      std::chrono::duration_cast<std::chrono::steady_clock::duration>(deadline));
  std::unique_lock lock(mutex_);
  cv_.wait_until(lock, stop, wake, [] { return false; });
  return !stop.stop_requested();
}

SimulatedClock::SimulatedClock(duration horizon) : horizon_(horizon) {}

Clock::duration SimulatedClock::now() const {
  std::lock_guard lock(mutex_);
  return now_;
}

bool SimulatedClock::sleep_until(duration deadline, std::stop_token stop) {
  std::unique_lock lock(mutex_);
  if (!cv_.wait(lock, stop, [this] { return released_; })) return false;
  if (deadline <= horizon_) {
    now_ = std::max(now_, deadline);
    return true;
  }
  now_ = std::max(now_, horizon_);
  parked_ = true;
  cv_.notify_all();
  cv_.wait(lock, stop, [] { return false; });
  parked_ = false;
  return false;
}

void SimulatedClock::settle() {
  std::unique_lock lock(mutex_);
  released_ = true;
  cv_.notify_all();
  cv_.wait(lock, [this] { return parked_; });
}

}  // namespace wattmark::power
