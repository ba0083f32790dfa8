#pragma once

#include <span>

namespace wattmark::stats {

inline constexpr double kDefaultAlpha = 0.05;

struct NormalityResult {
  double w = 0.0;
  double p = 0.0;
  bool normal = false;  ///< p >= alpha
};

/// Shapiro-Wilk W test, Royston's AS R94 algorithm (complete samples).
///
/// Accepts 3 <= n <= 5000. Throws TooFewSamplesError below 3, ContractViolation
/// above 5000 or on non-finite input, DegenerateError for a zero-range sample.
/// The p value is exact for n = 3 and uses Royston's normalizing
/// transformations otherwise.
NormalityResult shapiro_wilk(std::span<const double> sample, double alpha = kDefaultAlpha);

}  // namespace wattmark::stats
