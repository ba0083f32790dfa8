#pragma once

#include <string>
#include <vector>

#include "wattmark/stats/condition_matrix.hpp"
#include "wattmark/stats/pairwise.hpp"
#include "wattmark/stats/repeated_measures.hpp"
#include "wattmark/stats/shapiro_wilk.hpp"

namespace wattmark::stats {

struct AnalysisBundle {
  double alpha = kDefaultAlpha;
  std::vector<std::string> labels;
  std::size_t subjects = 0;
  std::vector<NormalityResult> normality;  ///< one per condition, label order
  SphericityResult sphericity;
  AnovaResult anova;
  std::vector<PairwiseResult> pairwise;
  bool used_gg = false;      ///< sphericity violated, so p_gg is the operative p
  double operative_p = 1.0;
  bool reject = false;       ///< operative_p < alpha
};

/// Normality per condition, then sphericity, then the ANOVA (GG-corrected p
/// when sphericity is rejected), then Bonferroni post hoc tests.
AnalysisBundle analyze(const ConditionMatrix& matrix, double alpha = kDefaultAlpha);

}  // namespace wattmark::stats
