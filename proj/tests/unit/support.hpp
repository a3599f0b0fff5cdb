#pragma once

// Shared test oracles. Everything here is independent of the library paths it
// checks: spectral radii come from power iteration, binomial bands from the
// exact CDF, medians from plain sorting.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace testsupport {

/// Dominant-eigenvalue magnitude of a symmetric matrix by power iteration.
inline double power_iteration_spectral_radius(const Eigen::MatrixXd& m, double tol = 1e-12,
                                              int max_iters = 200000) {
  const long n = m.rows();
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Eigen::VectorXd w = m * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    w /= norm;
    const double next = w.dot(m * w);
    if (std::abs(next - lambda) < tol) return std::abs(next);
    lambda = next;
    v = std::move(w);
  }
  return std::abs(lambda);
}

inline double log_binomial_pmf(long n, long k, double p) {
  return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
         std::lgamma(static_cast<double>(n - k) + 1) + static_cast<double>(k) * std::log(p) +
         static_cast<double>(n - k) * std::log1p(-p);
}

/// Two-sided binomial band: smallest interval [lo, hi] with
/// P(X < lo) < level/2 and P(X > hi) < level/2, from the exact CDF.
inline std::pair<long, long> binomial_band(long n, double p, double level) {
  std::vector<double> cdf(static_cast<std::size_t>(n) + 1);
  double acc = 0.0;
  for (long k = 0; k <= n; ++k) {
    acc += std::exp(log_binomial_pmf(n, k, p));
    cdf[static_cast<std::size_t>(k)] = acc;
  }
  long lo = 0;
  while (lo < n && cdf[static_cast<std::size_t>(lo)] < level / 2) ++lo;
  long hi = n;
  while (hi > 0 && 1.0 - cdf[static_cast<std::size_t>(hi - 1)] < level / 2) --hi;
  return {lo, hi};
}

inline double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testsupport
