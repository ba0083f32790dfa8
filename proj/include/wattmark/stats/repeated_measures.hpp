#pragma once

#include "wattmark/stats/condition_matrix.hpp"

namespace wattmark::stats {

struct SphericityResult {
  double w = 1.0;
  double chi_sq = 0.0;
  int df = 0;  ///< k(k-1)/2 - 1
  double p = 1.0;
  bool trivial = false;  ///< k = 2: one difference variance, always spherical

  bool satisfied(double alpha) const noexcept { return trivial || p >= alpha; }
};

/// Mauchly's test on the covariance of orthonormal condition contrasts.
///
/// W = det(A) / (tr(A) / p)^p with A = C' S C, p = k - 1. The chi-square
/// approximation uses the usual (n - 1) * (1 - (2p^2 + p + 2) / (6p(n - 1)))
/// scaling and the second-order correction term. Needs n > k; throws
/// DegenerateError if A is singular.
SphericityResult mauchly(const ConditionMatrix& matrix);

/// Greenhouse-Geisser epsilon, (tr A)^2 / (p * tr(A^2)), clamped to [1/p, 1].
/// Exactly 1 for k = 2.
double gg_epsilon(const ConditionMatrix& matrix);

struct AnovaResult {
  double f = 0.0;
  int df_num = 0;  ///< k - 1
  int df_den = 0;  ///< (n - 1)(k - 1)
  double p = 1.0;
  double eta_g_sq = 0.0;
  double gg_epsilon = 1.0;
  double p_gg = 1.0;
  double ss_conditions = 0.0;
  double ss_subjects = 0.0;
  double ss_error = 0.0;
  double ss_total = 0.0;
  /// Zero residual with a non-zero condition effect; F is +inf and p is 0.
  bool exact_fit = false;
};

/// One-factor within-subject ANOVA.
///
/// SS_total splits into subjects, conditions and the subject x condition
/// residual. Generalized eta squared for a purely within-subject one-factor
/// design is SS_cond / (SS_cond + SS_subjects + SS_error). p_gg evaluates F
/// at epsilon-scaled degrees of freedom.
AnovaResult rm_anova(const ConditionMatrix& matrix);

}  // namespace wattmark::stats
