#include "wattmark/power/power_trace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wattmark/errors.hpp"

namespace wattmark::power {
namespace {

void check_sample(const PowerSample& s) {
  if (!std::isfinite(s.watts) || s.watts <= 0.0) {
    throw InvalidTraceError("power sample must be positive and finite, got " +
                            std::to_string(s.watts) + " W");
  }
  if (s.elapsed_ms < 0) {
    throw InvalidTraceError("power sample has negative elapsed_ms " +
                            std::to_string(s.elapsed_ms));
  }
}

// Pairwise summation of squares over [first, last).
double pairwise_sum_sq(const double* first, std::size_t count) {
  constexpr std::size_t kLeaf = 8;
  if (count <= kLeaf) {
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) acc += first[i] * first[i];
    return acc;
  }
  const std::size_t half = count / 2;
  return pairwise_sum_sq(first, half) + pairwise_sum_sq(first + half, count - half);
}

const PowerTrace& require_sealed(const PowerTrace& trace) {
  if (!trace.sealed()) {
    throw ContractViolation("trace '" + trace.trial_id() + "' is not sealed");
  }
  if (trace.empty()) {
    throw ContractViolation("trace '" + trace.trial_id() + "' has no samples");
  }
  return trace;
}

}  // namespace

PowerTrace::PowerTrace(std::string trial_id, double sample_interval_s)
    : trial_id_(std::move(trial_id)), sample_interval_s_(sample_interval_s) {
  if (!(sample_interval_s > 0.0) || !std::isfinite(sample_interval_s)) {
    throw ContractViolation("sample interval must be positive, got " +
                            std::to_string(sample_interval_s));
  }
}

PowerTrace PowerTrace::sealed_from(std::string trial_id, double sample_interval_s,
                                   std::vector<PowerSample> samples) {
  PowerTrace trace(std::move(trial_id), sample_interval_s);
  trace.samples_.reserve(samples.size());
  for (const auto& s : samples) trace.append(s);
  trace.seal();
  return trace;
}

void PowerTrace::append(PowerSample sample) {
  if (sealed_) {
    throw ContractViolation("cannot append to sealed trace '" + trial_id_ + "'");
  }
  check_sample(sample);
  if (!samples_.empty() && sample.elapsed_ms < samples_.back().elapsed_ms) {
    throw InvalidTraceError("elapsed_ms went backwards in trace '" + trial_id_ + "'");
  }
  samples_.push_back(sample);
}

void PowerTrace::seal() {
  if (sealed_) throw AlreadySealedError("trace '" + trial_id_ + "' is already sealed");
  if (samples_.empty()) {
    throw InvalidTraceError("trace '" + trial_id_ + "' has no power samples");
  }
  sealed_ = true;
}

double rms(std::span<const double> values) {
  if (values.empty()) throw ContractViolation("rms of an empty sequence");
  // A constant sequence has RMS equal to its value; squaring and summing would
  // only add rounding error.
  if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); })) {
    return std::fabs(values.front());
  }
  const double sum_sq = pairwise_sum_sq(values.data(), values.size());
  return std::sqrt(sum_sq / static_cast<double>(values.size()));
}

double rms_watts(const PowerTrace& trace) {
  require_sealed(trace);
  std::vector<double> watts;
  watts.reserve(trace.size());
  for (const auto& s : trace.samples()) watts.push_back(s.watts);
  return rms(watts);
}

double mean_watts(const PowerTrace& trace) {
  require_sealed(trace);
  double acc = 0.0;
  for (const auto& s : trace.samples()) acc += s.watts;
  return acc / static_cast<double>(trace.size());
}

}  // namespace wattmark::power
