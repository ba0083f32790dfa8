#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "wattmark/power/clock.hpp"
#include "wattmark/power/power_trace.hpp"

namespace wattmark::power {

enum class BackendKind { live, replay, synthetic };

std::string_view to_string(BackendKind kind);
BackendKind backend_kind_from_string(std::string_view name);

/// Source of instantaneous GPU power readings.
///
/// `read_watts` returns a positive finite reading or throws TelemetryError.
class TelemetryBackend {
 public:
  virtual ~TelemetryBackend() = default;
  virtual BackendKind kind() const = 0;
  virtual std::string describe() const = 0;
  virtual double read_watts() = 0;
};

/// NVIDIA Management Library, loaded at runtime from libnvidia-ml.so.1.
/// Construction throws TelemetryError when the library, driver, or device is
/// unavailable.
class NvmlBackend final : public TelemetryBackend {
 public:
  explicit NvmlBackend(unsigned device_index);
  ~NvmlBackend() override;
  NvmlBackend(const NvmlBackend&) = delete;
  NvmlBackend& operator=(const NvmlBackend&) = delete;

  BackendKind kind() const override { return BackendKind::live; }
  std::string describe() const override;
  double read_watts() override;

 private:
  struct Library;
  std::unique_ptr<Library> lib_;
  unsigned device_index_;
  std::string device_name_;
};

/// Plays back a recorded trace against a SimulatedClock. Each read returns the
/// recorded sample whose timestamp is nearest to the clock's current time.
class ReplayBackend final : public TelemetryBackend {
 public:
  ReplayBackend(std::vector<PowerSample> recorded, std::shared_ptr<const Clock> clock,
                std::string source);

  BackendKind kind() const override { return BackendKind::replay; }
  std::string describe() const override;
  double read_watts() override;

  /// Horizon for a SimulatedClock that reaches every recorded tick at `interval`.
  static Clock::duration horizon_for(std::span<const PowerSample> recorded,
                                     Clock::duration interval);

 private:
  std::vector<PowerSample> recorded_;
  std::shared_ptr<const Clock> clock_;
  std::string source_;
};

/// Parameters of the synthetic device: a steady power level with Gaussian
/// read noise and optional transient read failures.
struct SyntheticDevice {
  double level_watts = 150.0;
  double noise_watts = 2.0;
  double read_failure_rate = 0.0;
  bool fail_startup = false;
};

class SyntheticBackend final : public TelemetryBackend {
 public:
  SyntheticBackend(SyntheticDevice device, std::uint64_t seed);

  BackendKind kind() const override { return BackendKind::synthetic; }
  std::string describe() const override;
  double read_watts() override;

 private:
  SyntheticDevice device_;
  std::mt19937_64 rng_;
  std::uint64_t reads_ = 0;
};

}  // namespace wattmark::power
