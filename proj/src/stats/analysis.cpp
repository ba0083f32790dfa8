#include "wattmark/stats/analysis.hpp"

#include "wattmark/errors.hpp"

namespace wattmark::stats {

AnalysisBundle analyze(const ConditionMatrix& matrix, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ContractViolation("alpha must be in (0, 1)");
  AnalysisBundle b;
  b.alpha = alpha;
  b.labels = matrix.labels();
  b.subjects = matrix.subjects();
  for (std::size_t j = 0; j < matrix.conditions(); ++j) {
    b.normality.push_back(shapiro_wilk(matrix.column(j), alpha));
  }
  b.sphericity = mauchly(matrix);
  b.anova = rm_anova(matrix);
  b.used_gg = !b.sphericity.satisfied(alpha);
  b.operative_p = b.used_gg ? b.anova.p_gg : b.anova.p;
  b.reject = b.operative_p < alpha;
  b.pairwise = paired_t_bonferroni(matrix, alpha);
  return b;
}

}  // namespace wattmark::stats
