#include <cmath>
#include <limits>
#include <vector>

#include "wattmark/errors.hpp"
#include "wattmark/stats/distributions.hpp"
#include "wattmark/stats/repeated_measures.hpp"

namespace wattmark::stats {
namespace {

// Residual sums below this fraction of SS_total are rounding noise.
constexpr double kExactFitRelTol = 1e-20;

}  // namespace

AnovaResult rm_anova(const ConditionMatrix& matrix) {
  const std::size_t n = matrix.subjects();
  const std::size_t k = matrix.conditions();

  double grand = 0.0;
  std::vector<double> row_mean(n, 0.0);
  std::vector<double> col_mean(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double v = matrix(i, j);
      row_mean[i] += v;
      col_mean[j] += v;
      grand += v;
    }
  }
  for (auto& r : row_mean) r /= static_cast<double>(k);
  for (auto& c : col_mean) c /= static_cast<double>(n);
  grand /= static_cast<double>(n * k);

  AnovaResult r;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double v = matrix(i, j);
      const double total_dev = v - grand;
      const double resid = v - row_mean[i] - col_mean[j] + grand;
      r.ss_total += total_dev * total_dev;
      r.ss_error += resid * resid;
    }
  }
  for (double m : row_mean) r.ss_subjects += (m - grand) * (m - grand);
  r.ss_subjects *= static_cast<double>(k);
  for (double m : col_mean) r.ss_conditions += (m - grand) * (m - grand);
  r.ss_conditions *= static_cast<double>(n);

  r.df_num = static_cast<int>(k - 1);
  r.df_den = static_cast<int>((n - 1) * (k - 1));

  if (!(r.ss_total > 0.0)) {
    throw DegenerateError("all cells are equal; the ANOVA is undefined");
  }
  const double noise_floor = r.ss_total * kExactFitRelTol;
  const bool no_effect = r.ss_conditions <= noise_floor;
  const bool no_error = r.ss_error <= noise_floor;
  r.eta_g_sq = r.ss_conditions / (r.ss_conditions + r.ss_subjects + r.ss_error);

  if (no_effect) {
    // Includes rows constant across conditions: nothing to attribute to the factor.
    r.f = 0.0;
    r.p = 1.0;
    r.gg_epsilon = no_error ? 1.0 : gg_epsilon(matrix);
    r.p_gg = 1.0;
    return r;
  }
  if (no_error) {
    r.exact_fit = true;
    r.f = std::numeric_limits<double>::infinity();
    r.p = 0.0;
    r.gg_epsilon = 1.0;
    r.p_gg = 0.0;
    return r;
  }

  const double ms_cond = r.ss_conditions / r.df_num;
  const double ms_err = r.ss_error / r.df_den;
  r.f = ms_cond / ms_err;
  r.p = f_upper_p(r.f, r.df_num, r.df_den);
  r.gg_epsilon = gg_epsilon(matrix);
  r.p_gg = f_upper_p(r.f, r.gg_epsilon * r.df_num, r.gg_epsilon * r.df_den);
  return r;
}

}  // namespace wattmark::stats
