#pragma once

#include <string>
#include <vector>

#include "wattmark/stats/condition_matrix.hpp"
#include "wattmark/stats/shapiro_wilk.hpp"

namespace wattmark::stats {

struct PairwiseResult {
  std::string a;
  std::string b;
  double t = 0.0;  ///< mean(a - b) / (sd(a - b) / sqrt(n))
  int df = 0;
  double p_raw = 1.0;  ///< two-sided
  double p_corrected = 1.0;
  bool reject = false;  ///< p_corrected < alpha
};

/// min(1, m * p_raw).
double bonferroni(double p_raw, int comparisons);

/// Paired t test for every unordered condition pair (i < j in label order),
/// Bonferroni-corrected over m = k(k-1)/2 comparisons. Throws DegenerateError
/// when a pair's differences have zero variance.
std::vector<PairwiseResult> paired_t_bonferroni(const ConditionMatrix& matrix,
                                                double alpha = kDefaultAlpha);

}  // namespace wattmark::stats
