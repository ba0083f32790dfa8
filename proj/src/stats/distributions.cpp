#include "wattmark/stats/distributions.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <string>

#include "wattmark/errors.hpp"

namespace wattmark::stats {
namespace {

void require_df(double df, const char* name) {
  if (!(df > 0.0) || !std::isfinite(df)) {
    throw ContractViolation(std::string(name) + " must be positive, got " + std::to_string(df));
  }
}

}  // namespace

double f_upper_p(double f, double df1, double df2) {
  require_df(df1, "df1");
  require_df(df2, "df2");
  if (std::isnan(f)) throw NumericDomainError("F statistic is NaN");
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  boost::math::fisher_f dist(df1, df2);
  return boost::math::cdf(boost::math::complement(dist, f));
}

double t_two_sided_p(double t, double df) {
  require_df(df, "df");
  if (std::isnan(t)) throw NumericDomainError("t statistic is NaN");
  if (std::isinf(t)) return 0.0;
  boost::math::students_t dist(df);
  const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
  return p > 1.0 ? 1.0 : p;
}

double chi_sq_upper_p(double x, double df) {
  require_df(df, "df");
  if (std::isnan(x)) throw NumericDomainError("chi-square statistic is NaN");
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  boost::math::chi_squared dist(df);
  return boost::math::cdf(boost::math::complement(dist, x));
}

double normal_upper_p(double z) {
  if (std::isnan(z)) throw NumericDomainError("z is NaN");
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ContractViolation("normal quantile needs p in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

}  // namespace wattmark::stats
