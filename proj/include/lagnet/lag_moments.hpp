#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lagnet/graph.hpp"
#include "lagnet/noise.hpp"
#include "lagnet/simulate.hpp"

namespace lagnet {

enum class MomentSource { empirical, analytic };

/// Family of k-lag covariance matrices over a node set, k in
/// [min_lag, max_lag]. Negative lags are stored as exact transposes of their
/// positive counterparts (the stationary identity R_{-k} = R_k^T), which
/// makes features of (i,j) and (j,i) mirror images.
struct LagMoments {
  int min_lag = 0;
  int max_lag = 0;
  std::vector<Eigen::MatrixXd> matrices;  // index lag - min_lag
  std::vector<int> observed;
  long sample_count = 0;
  MomentSource source = MomentSource::empirical;

  const Eigen::MatrixXd& at(int lag) const;
  bool covers(int lag) const { return lag >= min_lag && lag <= max_lag; }
  int dimension() const;
  int lag_count() const { return max_lag - min_lag + 1; }

  /// Submatrices over s (node ids, subset of observed).
  LagMoments restricted(const std::vector<int>& s) const;
};

/// R_hat_k = (1/n) sum_{l=0}^{n-1} y(l+k) y(l)^T over the observed columns,
/// with n = sample_count - max(max_lag, -min_lag): the trajectory is expected
/// to carry the extra tail. min_lag must be <= 1; the estimator entry points
/// enforce the {0,1,3} coverage the matrix estimators need.
LagMoments empirical_lag_moments(const TimeSeries& ts, int min_lag, int max_lag);

/// Solves R = A R A + Sigma_eff (Sigma_eff = covariance + xi_variance * I) by
/// fixed-point iteration from R = Sigma_eff; geometric convergence at rho^2.
Eigen::MatrixXd stationary_covariance(const InteractionMatrix& a, const NoiseModel& noise);

/// Model identity R_k = A^k R0 for k >= 0 and R_{-k} = R_k^T.
Eigen::MatrixXd analytic_lag_moment(const InteractionMatrix& a, const Eigen::MatrixXd& r0,
                                    int lag);

/// Full family of analytic lag moments over all nodes.
LagMoments analytic_lag_moments(const InteractionMatrix& a, const NoiseModel& noise,
                                int min_lag, int max_lag);

}  // namespace lagnet
