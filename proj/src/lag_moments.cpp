#include "lagnet/lag_moments.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

namespace lagnet {

const Eigen::MatrixXd& LagMoments::at(int lag) const {
  if (!covers(lag)) {
    throw std::out_of_range("lag moments: lag " + std::to_string(lag) + " outside [" +
                            std::to_string(min_lag) + ", " + std::to_string(max_lag) + "]");
  }
  return matrices[static_cast<std::size_t>(lag - min_lag)];
}

int LagMoments::dimension() const { return static_cast<int>(observed.size()); }

LagMoments LagMoments::restricted(const std::vector<int>& s) const {
  if (s.empty()) throw std::invalid_argument("lag moments: empty restriction");
  std::vector<int> positions;
  positions.reserve(s.size());
  std::size_t cursor = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k > 0 && s[k] <= s[k - 1]) {
      throw std::invalid_argument("lag moments: restriction not strictly increasing");
    }
    while (cursor < observed.size() && observed[cursor] < s[k]) ++cursor;
    if (cursor == observed.size() || observed[cursor] != s[k]) {
      throw std::invalid_argument("lag moments: node " + std::to_string(s[k]) +
                                  " is not covered");
    }
    positions.push_back(static_cast<int>(cursor));
  }
  LagMoments out;
  out.min_lag = min_lag;
  out.max_lag = max_lag;
  out.observed = s;
  out.sample_count = sample_count;
  out.source = source;
  out.matrices.reserve(matrices.size());
  const int m = static_cast<int>(positions.size());
  for (const Eigen::MatrixXd& full : matrices) {
    Eigen::MatrixXd sub(m, m);
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < m; ++c) sub(r, c) = full(positions[r], positions[c]);
    }
    out.matrices.push_back(std::move(sub));
  }
  return out;
}

LagMoments empirical_lag_moments(const TimeSeries& ts, int min_lag, int max_lag) {
  ts.validate();
  if (min_lag > 1) throw std::invalid_argument("lag moments: min_lag must be <= 1");
  if (max_lag < min_lag) throw std::invalid_argument("lag moments: empty lag range");
  if (max_lag < 1) throw std::invalid_argument("lag moments: max_lag must be >= 1");

  // The trajectory carries the tail: normalization count n excludes the
  // largest absolute lag so every sum ranges over l = 0..n-1 verbatim.
  const int reach = std::max(max_lag, min_lag < 0 ? -min_lag : 0);
  const long n = ts.sample_count() - reach;
  if (n < 1) {
    throw std::invalid_argument("lag moments: insufficient samples for max lag " +
                                std::to_string(reach));
  }

  std::vector<Eigen::MatrixXd> positive(static_cast<std::size_t>(reach) + 1);
  const Eigen::MatrixXd base = ts.samples.middleRows(0, n);
  for (int k = 0; k <= reach; ++k) {
    positive[static_cast<std::size_t>(k)] =
        (ts.samples.middleRows(k, n).transpose() * base) / static_cast<double>(n);
  }

  LagMoments out;
  out.min_lag = min_lag;
  out.max_lag = max_lag;
  out.observed = ts.observed;
  out.sample_count = n;
  out.source = MomentSource::empirical;
  out.matrices.resize(static_cast<std::size_t>(max_lag - min_lag + 1));
  for (int k = min_lag; k <= max_lag; ++k) {
    const std::size_t slot = static_cast<std::size_t>(k - min_lag);
    if (k >= 0) {
      out.matrices[slot] = positive[static_cast<std::size_t>(k)];
    } else {
      out.matrices[slot] = positive[static_cast<std::size_t>(-k)].transpose();
    }
  }
  return out;
}

Eigen::MatrixXd stationary_covariance(const InteractionMatrix& a, const NoiseModel& noise) {
  const int n = a.dimension();
  if (noise.dimension() != n) {
    throw std::invalid_argument("stationary_covariance: dimension mismatch");
  }
  Eigen::MatrixXd sigma_eff = noise.covariance;
  if (noise.xi_variance > 0.0) {
    sigma_eff += noise.xi_variance * Eigen::MatrixXd::Identity(n, n);
  }
  Eigen::MatrixXd r = sigma_eff;
  // Geometric convergence at rho^2; the tolerance is widened to the rounding
  // floor of the iterates so large covariances terminate too.
  const long max_iters = 1000000;
  for (long it = 0; it < max_iters; ++it) {
    Eigen::MatrixXd next = a.entries * r * a.entries + sigma_eff;
    const double update = (next - r).cwiseAbs().maxCoeff();
    r = std::move(next);
    const double floor_tol =
        std::max(1e-13, 16.0 * n * std::numeric_limits<double>::epsilon() *
                            r.cwiseAbs().maxCoeff());
    if (update <= floor_tol) return r;
  }
  throw std::runtime_error("stationary_covariance: fixed point did not converge");
}

Eigen::MatrixXd analytic_lag_moment(const InteractionMatrix& a, const Eigen::MatrixXd& r0,
                                    int lag) {
  if (r0.rows() != a.dimension() || r0.cols() != a.dimension()) {
    throw std::invalid_argument("analytic_lag_moment: r0 dimension mismatch");
  }
  Eigen::MatrixXd m = r0;
  for (int k = 0; k < std::abs(lag); ++k) m = a.entries * m;
  if (lag < 0) return m.transpose();
  return m;
}

LagMoments analytic_lag_moments(const InteractionMatrix& a, const NoiseModel& noise,
                                int min_lag, int max_lag) {
  if (min_lag > 1) throw std::invalid_argument("lag moments: min_lag must be <= 1");
  if (max_lag < std::max(min_lag, 1)) {
    throw std::invalid_argument("lag moments: invalid lag range");
  }
  const Eigen::MatrixXd r0 = stationary_covariance(a, noise);
  const int reach = std::max(max_lag, min_lag < 0 ? -min_lag : 0);
  std::vector<Eigen::MatrixXd> positive;
  positive.reserve(static_cast<std::size_t>(reach) + 1);
  positive.push_back(r0);
  for (int k = 1; k <= reach; ++k) positive.push_back(a.entries * positive.back());

  LagMoments out;
  out.min_lag = min_lag;
  out.max_lag = max_lag;
  out.sample_count = 0;
  out.source = MomentSource::analytic;
  out.observed.resize(a.dimension());
  for (int i = 0; i < a.dimension(); ++i) out.observed[i] = i;
  out.matrices.reserve(static_cast<std::size_t>(max_lag - min_lag + 1));
  for (int k = min_lag; k <= max_lag; ++k) {
    if (k >= 0) {
      out.matrices.push_back(positive[static_cast<std::size_t>(k)]);
    } else {
      out.matrices.push_back(positive[static_cast<std::size_t>(-k)].transpose());
    }
  }
  return out;
}

}  // namespace lagnet
