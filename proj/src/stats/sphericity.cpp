#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "wattmark/errors.hpp"
#include "wattmark/stats/distributions.hpp"
#include "wattmark/stats/repeated_measures.hpp"

namespace wattmark::stats {
namespace {

// Helmert contrasts, orthonormal: k x (k - 1).
Eigen::MatrixXd helmert(std::size_t k) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k),
                                            static_cast<Eigen::Index>(k - 1));
  for (Eigen::Index j = 0; j < c.cols(); ++j) {
    const double norm = std::sqrt(static_cast<double>((j + 1) * (j + 2)));
    for (Eigen::Index i = 0; i <= j; ++i) c(i, j) = 1.0 / norm;
    c(j + 1, j) = -static_cast<double>(j + 1) / norm;
  }
  return c;
}

// Sample covariance (n - 1 denominator) of the contrast scores.
Eigen::MatrixXd contrast_covariance(const ConditionMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.subjects());
  const auto k = static_cast<Eigen::Index>(m.conditions());
  Eigen::MatrixXd x(n, k);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < k; ++j) x(i, j) = m(static_cast<std::size_t>(i),
                                                     static_cast<std::size_t>(j));
  Eigen::MatrixXd y = x * helmert(m.conditions());
  y.rowwise() -= y.colwise().mean();
  return (y.transpose() * y) / static_cast<double>(n - 1);
}

}  // namespace

SphericityResult mauchly(const ConditionMatrix& matrix) {
  const std::size_t k = matrix.conditions();
  const std::size_t n = matrix.subjects();
  if (k == 2) return {.w = 1.0, .chi_sq = 0.0, .df = 0, .p = 1.0, .trivial = true};
  if (n <= k) {
    throw ContractViolation("Mauchly's test needs more subjects than conditions (n=" +
                            std::to_string(n) + ", k=" + std::to_string(k) + ")");
  }
  const Eigen::MatrixXd a = contrast_covariance(matrix);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd eig = solver.eigenvalues();
  const double largest = eig.maxCoeff();
  const double p = static_cast<double>(k - 1);
  if (!(largest > 0.0) || eig.minCoeff() <= largest * 1e-12) {
    throw DegenerateError("contrast covariance is singular; sphericity is undefined");
  }
  // log W = sum(log lambda) - p * log(mean lambda)
  double log_w = 0.0;
  for (Eigen::Index i = 0; i < eig.size(); ++i) log_w += std::log(eig(i));
  log_w -= p * std::log(eig.sum() / p);
  const double w = std::min(1.0, std::exp(log_w));

  const double nm1 = static_cast<double>(n - 1);
  const double f = 1.0 - (2.0 * p * p + p + 2.0) / (6.0 * p * nm1);
  const double chi_sq = std::max(0.0, -nm1 * f * log_w);
  const int df = static_cast<int>(k * (k - 1) / 2 - 1);
  // Second-order term; vanishes for k = 3.
  const double w2 = (p + 2.0) * (p - 1.0) * (p - 2.0) *
                    (2.0 * p * p * p + 6.0 * p * p + 3.0 * static_cast<double>(k) + 2.0) /
                    (288.0 * std::pow(nm1 * p * f, 2.0));
  const double p1 = chi_sq_upper_p(chi_sq, df);
  const double p2 = chi_sq_upper_p(chi_sq, df + 4);
  const double pval = std::clamp(p1 + w2 * (p2 - p1), 0.0, 1.0);
  return {.w = w, .chi_sq = chi_sq, .df = df, .p = pval, .trivial = false};
}

double gg_epsilon(const ConditionMatrix& matrix) {
  const std::size_t k = matrix.conditions();
  if (k == 2) return 1.0;
  const Eigen::MatrixXd a = contrast_covariance(matrix);
  const double p = static_cast<double>(k - 1);
  const double trace = a.trace();
  const double trace_sq = (a * a).trace();
  if (!(trace_sq > 0.0)) {
    throw DegenerateError("contrast covariance is zero; epsilon is undefined");
  }
  return std::clamp(trace * trace / (p * trace_sq), 1.0 / p, 1.0);
}

}  // namespace wattmark::stats
