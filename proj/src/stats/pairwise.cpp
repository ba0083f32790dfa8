#include "wattmark/stats/pairwise.hpp"

#include <algorithm>
#include <cmath>

#include "wattmark/errors.hpp"
#include "wattmark/stats/distributions.hpp"

namespace wattmark::stats {

double bonferroni(double p_raw, int comparisons) {
  if (comparisons < 1) throw ContractViolation("Bonferroni needs at least one comparison");
  if (!(p_raw >= 0.0 && p_raw <= 1.0)) throw ContractViolation("p value outside [0, 1]");
  return std::min(1.0, p_raw * comparisons);
}

std::vector<PairwiseResult> paired_t_bonferroni(const ConditionMatrix& matrix, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ContractViolation("alpha must be in (0, 1)");
  const std::size_t n = matrix.subjects();
  const std::size_t k = matrix.conditions();
  const int m = static_cast<int>(k * (k - 1) / 2);
  const auto& labels = matrix.labels();

  std::vector<PairwiseResult> out;
  out.reserve(static_cast<std::size_t>(m));
  std::vector<double> d(n);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        d[i] = matrix(i, a) - matrix(i, b);
        mean += d[i];
      }
      mean /= static_cast<double>(n);
      double ss = 0.0;
      for (double v : d) ss += (v - mean) * (v - mean);
      const double sd = std::sqrt(ss / static_cast<double>(n - 1));
      if (!(sd > 0.0) || sd <= 1e-14 * std::fabs(mean)) {
        throw DegenerateError("differences between '" + labels[a] + "' and '" + labels[b] +
                              "' have zero variance");
      }
      PairwiseResult r;
      r.a = labels[a];
      r.b = labels[b];
      r.t = mean / (sd / std::sqrt(static_cast<double>(n)));
      r.df = static_cast<int>(n - 1);
      r.p_raw = t_two_sided_p(r.t, r.df);
      r.p_corrected = bonferroni(r.p_raw, m);
      r.reject = r.p_corrected < alpha;
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace wattmark::stats
