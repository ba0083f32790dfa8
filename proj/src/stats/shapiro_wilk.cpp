#include "wattmark/stats/shapiro_wilk.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "wattmark/errors.hpp"
#include "wattmark/stats/distributions.hpp"

namespace wattmark::stats {
namespace {

// Polynomial approximations from AS R94.
constexpr std::array<double, 6> kC1{0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056};
constexpr std::array<double, 6> kC2{0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
constexpr std::array<double, 4> kC3{0.5440, -0.39978, 0.025054, -6.714e-4};
constexpr std::array<double, 4> kC4{1.3822, -0.77857, 0.062767, -0.0020322};
constexpr std::array<double, 4> kC5{-1.5861, -0.31082, -0.083751, 0.0038915};
constexpr std::array<double, 3> kC6{-0.4803, -0.082676, 0.0030302};
constexpr std::array<double, 2> kG{-2.273, 0.459};

constexpr double kSmall = 1e-19;
constexpr std::size_t kMaxN = 5000;

template <std::size_t N>
double poly(const std::array<double, N>& c, double x) {
  double acc = 0.0;
  for (std::size_t i = N; i-- > 0;) acc = acc * x + c[i];
  return acc;
}

// Coefficients a_1..a_{n/2} for the lower half of the ordered sample.
std::vector<double> coefficients(std::size_t n) {
  const std::size_t half = n / 2;
  std::vector<double> a(half);
  if (n == 3) {
    a[0] = std::numbers::sqrt2 / 2.0;
    return a;
  }
  const double an = static_cast<double>(n);
  std::vector<double> m(half);
  double summ2 = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    m[i] = normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
    summ2 += m[i] * m[i];
  }
  summ2 *= 2.0;
  const double ssumm2 = std::sqrt(summ2);
  const double rsn = 1.0 / std::sqrt(an);
  const double a1 = poly(kC1, rsn) - m[0] / ssumm2;

  std::size_t first_plain;
  double fac;
  if (n > 5) {
    first_plain = 2;
    const double a2 = -m[1] / ssumm2 + poly(kC2, rsn);
    fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                    (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
    a[1] = a2;
  } else {
    first_plain = 1;
    fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
  }
  a[0] = a1;
  for (std::size_t i = first_plain; i < half; ++i) a[i] = -m[i] / fac;
  return a;
}

}  // namespace

NormalityResult shapiro_wilk(std::span<const double> sample, double alpha) {
  const std::size_t n = sample.size();
  if (n < 3) {
    throw TooFewSamplesError("Shapiro-Wilk needs at least 3 values, got " + std::to_string(n));
  }
  if (n > kMaxN) {
    throw ContractViolation("Shapiro-Wilk supports at most 5000 values, got " + std::to_string(n));
  }
  std::vector<double> x(sample.begin(), sample.end());
  for (double v : x) {
    if (!std::isfinite(v)) throw ContractViolation("Shapiro-Wilk sample must be finite");
  }
  std::sort(x.begin(), x.end());
  const double range = x.back() - x.front();
  if (!(range > 0.0) || range < kSmall * std::max(1.0, std::fabs(x.front()))) {
    throw DegenerateError("Shapiro-Wilk sample has zero variance");
  }

  const auto a = coefficients(n);
  // Signed coefficient for order statistic i: -a for the lower half, +a for
  // the upper half, 0 at the median of an odd sample.
  auto coef = [&](std::size_t i) {
    const std::size_t mirror = n - 1 - i;
    if (i == mirror) return 0.0;
    return i < mirror ? -a[i] : a[mirror];
  };

  // W as the squared correlation between the scaled data and the coefficients.
  double sa = 0.0;
  double sx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sa += coef(i);
    sx += x[i] / range;
  }
  sa /= static_cast<double>(n);
  sx /= static_cast<double>(n);
  double ssa = 0.0;
  double ssx = 0.0;
  double sax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double asa = coef(i) - sa;
    const double xsx = x[i] / range - sx;
    ssa += asa * asa;
    ssx += xsx * xsx;
    sax += asa * xsx;
  }
  // 1 - W, formed so that W close to 1 keeps its precision.
  const double ssassx = std::sqrt(ssa * ssx);
  const double w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);
  const double w = 1.0 - w1;

  double p;
  if (n == 3) {
    constexpr double kPi6 = 6.0 / std::numbers::pi;
    constexpr double kStqr = std::numbers::pi / 3.0;
    p = std::max(0.0, kPi6 * (std::asin(std::sqrt(w)) - kStqr));
  } else {
    const double an = static_cast<double>(n);
    double y = std::log(w1);
    double mean;
    double sd;
    if (n <= 11) {
      const double gamma = poly(kG, an);
      if (y >= gamma) return {w, 0.0, false};  // beyond the approximation's support
      y = -std::log(gamma - y);
      mean = poly(kC3, an);
      sd = std::exp(poly(kC4, an));
    } else {
      const double log_n = std::log(an);
      mean = poly(kC5, log_n);
      sd = std::exp(poly(kC6, log_n));
    }
    p = normal_upper_p((y - mean) / sd);
  }
  p = std::clamp(p, 0.0, 1.0);
  return {w, p, p >= alpha};
}

}  // namespace wattmark::stats
