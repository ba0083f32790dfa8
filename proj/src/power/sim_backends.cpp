#include <algorithm>
#include <cmath>
#include <sstream>

#include "wattmark/errors.hpp"
#include "wattmark/power/telemetry.hpp"

namespace wattmark::power {

std::string_view to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::live: return "live";
    case BackendKind::replay: return "replay";
    case BackendKind::synthetic: return "synthetic";
  }
  return "unknown";
}

BackendKind backend_kind_from_string(std::string_view name) {
  if (name == "live") return BackendKind::live;
  if (name == "replay") return BackendKind::replay;
  if (name == "synthetic") return BackendKind::synthetic;
  throw ConfigError("unknown backend '" + std::string(name) +
                    "' (expected live, replay or synthetic)");
}

ReplayBackend::ReplayBackend(std::vector<PowerSample> recorded,
                             std::shared_ptr<const Clock> clock, std::string source)
    : recorded_(std::move(recorded)), clock_(std::move(clock)), source_(std::move(source)) {
  if (recorded_.empty()) throw InvalidTraceError("replay source '" + source_ + "' is empty");
  if (!clock_) throw ContractViolation("replay backend needs a clock");
}

std::string ReplayBackend::describe() const {
  return "replay of " + source_ + " (" + std::to_string(recorded_.size()) + " samples)";
}

double ReplayBackend::read_watts() {
  const auto now_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(clock_->now()).count();
  auto it = std::lower_bound(
      recorded_.begin(), recorded_.end(), now_ms,
      [](const PowerSample& s, std::int64_t t) { return s.elapsed_ms < t; });
  if (it == recorded_.end()) return recorded_.back().watts;
  if (it != recorded_.begin()) {
    auto prev = std::prev(it);
    if (now_ms - prev->elapsed_ms <= it->elapsed_ms - now_ms) return prev->watts;
  }
  return it->watts;
}

Clock::duration ReplayBackend::horizon_for(std::span<const PowerSample> recorded,
                                           Clock::duration interval) {
  if (recorded.empty()) return Clock::duration{0};
  return std::chrono::milliseconds(recorded.back().elapsed_ms) + interval / 2;
}

SyntheticBackend::SyntheticBackend(SyntheticDevice device, std::uint64_t seed)
    : device_(device), rng_(seed) {
  if (!(device_.level_watts > 0.0) || !std::isfinite(device_.level_watts)) {
    throw ContractViolation("synthetic level must be positive");
  }
  if (device_.noise_watts < 0.0 || device_.read_failure_rate < 0.0 ||
      device_.read_failure_rate >= 1.0) {
    throw ContractViolation("synthetic noise and failure rate out of range");
  }
}

std::string SyntheticBackend::describe() const {
  std::ostringstream os;
  os << "synthetic device level=" << device_.level_watts << "W noise=" << device_.noise_watts
     << "W";
  return os.str();
}

double SyntheticBackend::read_watts() {
  const bool first = reads_++ == 0;
  if (first && device_.fail_startup) throw TelemetryError("synthetic device unreachable");
  // Draw both variates on every read so the value stream does not depend on failures.
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  const double u = unit(rng_);
  const double z = noise(rng_);
  if (!first && u < device_.read_failure_rate) {
    throw TelemetryError("synthetic transient read failure");
  }
  return std::max(device_.level_watts + device_.noise_watts * z, 1e-3);
}

}  // namespace wattmark::power
