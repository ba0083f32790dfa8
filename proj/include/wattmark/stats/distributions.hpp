#pragma once

namespace wattmark::stats {

// Upper-tail probabilities are computed directly from the regularized
// incomplete beta/gamma complements, never as 1 - cdf, so they stay accurate
// far below 1e-15.

/// P(F > f) for F ~ F(df1, df2). Real-valued dfs are allowed (GG correction).
double f_upper_p(double f, double df1, double df2);

/// Two-sided P(|T| > |t|) for T ~ t(df).
double t_two_sided_p(double t, double df);

/// P(X > x) for X ~ chi-square(df).
double chi_sq_upper_p(double x, double df);

/// P(Z > z) for a standard normal.
double normal_upper_p(double z);

/// Standard normal quantile.
double normal_quantile(double p);

}  // namespace wattmark::stats
