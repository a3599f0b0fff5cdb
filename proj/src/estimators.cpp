#include "lagnet/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lagnet {

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::one_lag: return "one_lag";
    case EstimatorKind::nig: return "nig";
    case EstimatorKind::precision: return "precision";
    case EstimatorKind::granger: return "granger";
  }
  throw std::invalid_argument("unknown estimator kind");
}

EstimatorKind estimator_kind_from_string(const std::string& name) {
  if (name == "one_lag") return EstimatorKind::one_lag;
  if (name == "nig") return EstimatorKind::nig;
  if (name == "precision") return EstimatorKind::precision;
  if (name == "granger") return EstimatorKind::granger;
  throw std::invalid_argument("unknown estimator kind: " + name);
}

double osc(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("osc: empty value set");
  double lo = values[0];
  double hi = values[0];
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

std::vector<double> off_diagonal_values(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n) * (n - 1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) out.push_back(m(i, j));
    }
  }
  return out;
}

namespace {

double condition_number(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const double smax = svd.singularValues().maxCoeff();
  const double smin = svd.singularValues().minCoeff();
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

std::vector<int> checked_subset(const std::vector<int>& s, int n, const char* who) {
  if (s.empty()) throw std::invalid_argument(std::string(who) + ": empty index set");
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] < 0 || s[k] >= n) {
      throw std::invalid_argument(std::string(who) + ": node id out of range");
    }
    if (k > 0 && s[k] <= s[k - 1]) {
      throw std::invalid_argument(std::string(who) + ": index set not strictly increasing");
    }
  }
  return s;
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<int>& s) {
  const int k = static_cast<int>(s.size());
  Eigen::MatrixXd out(k, k);
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) out(r, c) = m(s[r], s[c]);
  }
  return out;
}

}  // namespace

Eigen::MatrixXd invert_with_ridge(const Eigen::MatrixXd& m, double cond_limit) {
  if (m.rows() != m.cols()) throw std::invalid_argument("invert: matrix not square");
  if (condition_number(m) <= cond_limit) {
    return Eigen::PartialPivLU<Eigen::MatrixXd>(m).inverse();
  }
  const double lambda = 1e-8 * std::abs(m.trace()) / static_cast<double>(m.rows());
  const Eigen::MatrixXd ridged =
      m + lambda * Eigen::MatrixXd::Identity(m.rows(), m.cols());
  if (lambda > 0.0 && condition_number(ridged) <= cond_limit) {
    return Eigen::PartialPivLU<Eigen::MatrixXd>(ridged).inverse();
  }
  throw std::runtime_error("invert: matrix numerically singular beyond ridge recovery");
}

MatrixEstimate estimate(const LagMoments& moments, EstimatorKind kind) {
  for (int lag : {0, 1, 3}) {
    if (!moments.covers(lag)) {
      throw std::invalid_argument("estimate: moments must cover lags {0, 1, 3}");
    }
  }
  MatrixEstimate est;
  est.kind = kind;
  est.sample_count = moments.sample_count;
  est.observed = moments.observed;
  switch (kind) {
    case EstimatorKind::one_lag:
      est.values = moments.at(1);
      break;
    case EstimatorKind::nig:
      est.values = moments.at(1) - moments.at(3);
      break;
    case EstimatorKind::precision:
      est.values = invert_with_ridge(moments.at(0));
      break;
    case EstimatorKind::granger:
      est.values = moments.at(1) * invert_with_ridge(moments.at(0));
      break;
  }
  return est;
}

Eigen::MatrixXd error_matrix(const InteractionMatrix& a, const NoiseModel& noise,
                             const std::vector<int>& s) {
  const int n = a.dimension();
  if (noise.dimension() != n) throw std::invalid_argument("error_matrix: dimension mismatch");
  const std::vector<int> idx = checked_subset(s, n, "error_matrix");
  const double gap = noise.effective_gap();

  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(n, n);
  if (noise.sigma_bar.cwiseAbs().maxCoeff() > 0.0) {
    // sum_{i>=0} A^{i+1} sigma_bar A^i, truncated at the double-precision
    // floor; terms contract by rho^2 each step.
    Eigen::MatrixXd term = a.entries * noise.sigma_bar;
    Eigen::MatrixXd series = Eigen::MatrixXd::Zero(n, n);
    for (long i = 0; i < 100000; ++i) {
      series += term;
      if (term.cwiseAbs().maxCoeff() < 1e-14) break;
      term = a.entries * term * a.entries;
    }
    full = (Eigen::MatrixXd::Identity(n, n) - a.entries * a.entries) * series;
  }

  Eigen::MatrixXd err = submatrix(full, idx);
  err.array() += noise.beta * a.rho;  // beta rho 1_S 1_S^T
  err /= gap;
  return err;
}

FeasibilityReport feasibility_margin(const InteractionMatrix& a, const NoiseModel& noise,
                                     const std::vector<int>& s) {
  FeasibilityReport report;
  report.error_matrix = error_matrix(a, noise, s);
  const std::vector<double> err_off = off_diagonal_values(report.error_matrix);
  report.osc_error = err_off.empty() ? 0.0 : osc(err_off);
  const std::vector<double> cov_off = off_diagonal_values(noise.covariance);
  report.lhs = cov_off.empty() ? 0.0 : osc(cov_off) / noise.effective_gap();
  if (a.rho > 0.0 && std::isfinite(a.a_plus_min)) {
    report.rhs = a.a_plus_min * (1.0 - a.rho * a.rho) /
                 (2.0 * a.rho * (a.rho * a.rho + 1.0));
  } else {
    report.rhs = std::numeric_limits<double>::infinity();
  }
  report.feasible = report.lhs <= report.rhs;
  report.consistency_bound = a.a_plus_min / 2.0;
  return report;
}

double min_exogenous_variance(const InteractionMatrix& a, const NoiseModel& noise) {
  const std::vector<double> cov_off = off_diagonal_values(noise.covariance);
  if (cov_off.empty()) return 0.0;
  const double spread = osc(cov_off);
  double rhs = std::numeric_limits<double>::infinity();
  if (a.rho > 0.0 && std::isfinite(a.a_plus_min)) {
    rhs = a.a_plus_min * (1.0 - a.rho * a.rho) / (2.0 * a.rho * (a.rho * a.rho + 1.0));
  }
  if (std::isinf(rhs)) return 0.0;
  const double gap = noise.sigma_gap_sq;
  const double target = spread / rhs;  // effective gap that attains equality
  double xi = std::max(0.0, target - gap);
  // Closed form up to rounding; widen the target by a few epsilons until the
  // inequality actually holds so the returned value always flips feasibility.
  double margin = 4.0 * std::numeric_limits<double>::epsilon();
  for (int i = 0; i < 8 && xi > 0.0 && spread / (gap + xi) > rhs; ++i) {
    xi = std::max(xi, target * (1.0 + margin) - gap);
    margin *= 2.0;
  }
  return xi;
}

BoolMatrix threshold_support(const MatrixEstimate& est, double threshold) {
  const int n = static_cast<int>(est.values.rows());
  BoolMatrix support = BoolMatrix::Constant(n, n, false);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double v = (est.values(i, j) + est.values(j, i)) / 2.0;
      if (v > threshold) {
        support(i, j) = true;
        support(j, i) = true;
      }
    }
  }
  return support;
}

double largest_gap_threshold(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("largest_gap_threshold: need >= 2 values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double best_gap = -1.0;
  double threshold = sorted.front();
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const double gap = sorted[i] - sorted[i - 1];
    if (gap > best_gap) {
      best_gap = gap;
      threshold = (sorted[i] + sorted[i - 1]) / 2.0;
    }
  }
  return threshold;
}

}  // namespace lagnet
