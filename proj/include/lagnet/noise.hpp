#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace lagnet {

/// Spatially colored, temporally independent Gaussian noise with homogeneous
/// variance sigma_sq across nodes. The covariance splits uniquely as
///
///   covariance = sigma_gap_sq * I + beta * 11^T + sigma_bar
///
/// where sigma_gap_sq = sigma_sq - max off-diagonal (> 0 by strict
/// dominance), beta is the mean off-diagonal entry, and sigma_bar carries the
/// remaining variation (zero-mean off-diagonals, constant diagonal).
/// xi_variance is optional exogenous isotropic excitation; it widens the
/// effective variance gap without touching the covariance itself.
struct NoiseModel {
  Eigen::MatrixXd covariance;
  double sigma_sq = 0.0;
  double sigma_gap_sq = 0.0;
  double beta = 0.0;
  Eigen::MatrixXd sigma_bar;
  double xi_variance = 0.0;

  int dimension() const { return static_cast<int>(covariance.rows()); }
  double effective_gap() const { return sigma_gap_sq + xi_variance; }
  NoiseModel with_exogenous(double xi) const;
  void validate(double tol = 1e-10) const;
};

/// Unique decomposition of a homogeneous-diagonal PSD covariance.
/// Throws when the diagonal is heterogeneous (deviation > 1e-10), when some
/// off-diagonal ties or exceeds the diagonal, or when the input is not PSD.
/// For a 1x1 covariance the max off-diagonal is taken as 0.
NoiseModel decompose_covariance(const Eigen::MatrixXd& cov);

/// covariance = sigma_gap_sq * I + beta * 11^T (sigma_bar = 0).
NoiseModel offset_noise(int n_nodes, double sigma_gap_sq, double beta);

/// Offset covariance plus a seeded Gram-matrix perturbation of the
/// off-diagonals, rescaled to max-abs `jitter` and recentered to mean zero.
/// Resamples (up to 100 tries) until PSD and strict dominance hold; the
/// stored fields come from re-running decompose_covariance on the result.
NoiseModel jittered_noise(int n_nodes, double sigma_gap_sq, double beta, double jitter,
                          std::uint64_t seed);

/// Symmetric PSD square-root factor via eigendecomposition; eigenvalues below
/// 1e-12 clamp to zero, so semidefinite inputs are fine.
Eigen::MatrixXd psd_sqrt_factor(const Eigen::MatrixXd& cov);

/// count i.i.d. draws from N(0, cov), one per row. Deterministic per seed.
Eigen::MatrixXd sample_mvn(const Eigen::MatrixXd& cov, long count, std::uint64_t seed);
Eigen::MatrixXd sample_noise(const NoiseModel& model, long count, std::uint64_t seed);

}  // namespace lagnet
