#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace wattmark::power {

/// One power reading. `elapsed_ms` counts from the start of the trial.
struct PowerSample {
  std::int64_t elapsed_ms = 0;
  double watts = 0.0;

  friend bool operator==(const PowerSample&, const PowerSample&) = default;
};

/// Ordered watt samples for one trial.
///
/// A trace is built by exactly one producer and sealed once; after sealing it
/// is immutable and may be handed to other threads. Samples must carry
/// positive finite watts and non-decreasing timestamps, and a sealed trace
/// always holds at least one sample.
class PowerTrace {
 public:
  PowerTrace(std::string trial_id, double sample_interval_s);

  /// Builds an already-sealed trace, validating every sample.
  static PowerTrace sealed_from(std::string trial_id, double sample_interval_s,
                                std::vector<PowerSample> samples);

  void append(PowerSample sample);
  void seal();

  bool sealed() const noexcept { return sealed_; }
  bool empty() const noexcept { return samples_.empty(); }
  std::size_t size() const noexcept { return samples_.size(); }
  std::span<const PowerSample> samples() const noexcept { return samples_; }
  const std::string& trial_id() const noexcept { return trial_id_; }
  double sample_interval_s() const noexcept { return sample_interval_s_; }

 private:
  std::string trial_id_;
  double sample_interval_s_;
  std::vector<PowerSample> samples_;
  bool sealed_ = false;
};

/// Root mean square of the trace's watt samples: sqrt(sum(W_i^2) / n).
/// Requires a sealed, non-empty trace.
double rms_watts(const PowerTrace& trace);

/// Arithmetic mean of the watt samples. Same preconditions as rms_watts.
double mean_watts(const PowerTrace& trace);

/// RMS over raw values; pairwise summation of squares.
double rms(std::span<const double> values);

}  // namespace wattmark::power
