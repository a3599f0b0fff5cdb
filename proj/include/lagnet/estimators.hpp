#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "lagnet/graph.hpp"
#include "lagnet/lag_moments.hpp"
#include "lagnet/noise.hpp"

namespace lagnet {

enum class EstimatorKind { one_lag, nig, precision, granger };

std::string to_string(EstimatorKind kind);
EstimatorKind estimator_kind_from_string(const std::string& name);

/// Matrix-valued structure estimate over the observed set.
struct MatrixEstimate {
  Eigen::MatrixXd values;
  EstimatorKind kind = EstimatorKind::one_lag;
  long sample_count = 0;
  std::vector<int> observed;
};

/// Limiting-error analysis of the normalized R1 - R3 estimator:
///   lhs  = Osc(Off(Sigma_x)) / (sigma_gap_sq + xi_variance)
///   rhs  = a_plus_min (1 - rho^2) / (2 rho (rho^2 + 1))
/// feasible <=> lhs <= rhs, in which case Osc of the off-diagonals of the
/// error matrix stays below consistency_bound = a_plus_min / 2 and
/// thresholding recovers the exact support.
struct FeasibilityReport {
  Eigen::MatrixXd error_matrix;
  double osc_error = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool feasible = false;
  double consistency_bound = 0.0;
};

/// max - min of a nonempty value set.
double osc(std::span<const double> values);

/// Off-diagonal entries in row-major order.
std::vector<double> off_diagonal_values(const Eigen::MatrixXd& m);

/// Inverse with a ridge fallback: when the condition number exceeds
/// cond_limit, adds lambda * I with lambda = 1e-8 * trace / dim and retries
/// once. Throws when the matrix stays numerically singular.
Eigen::MatrixXd invert_with_ridge(const Eigen::MatrixXd& m, double cond_limit = 1e12);

/// one_lag: R1;  nig: R1 - R3;  precision: R0^{-1};  granger: R1 R0^{-1}.
/// Requires moments covering lags {0, 1, 3}.
MatrixEstimate estimate(const LagMoments& moments, EstimatorKind kind);

/// Limiting error matrix of the normalized NIG estimator over s:
///   (1/gap) [ beta rho 11^T + [(I - A^2) sum_{i>=0} A^{i+1} sigma_bar A^i]_s ]
/// with gap = sigma_gap_sq + xi_variance. The series truncates when the
/// current term drops below 1e-14 max-abs (geometric decay at rho^2).
Eigen::MatrixXd error_matrix(const InteractionMatrix& a, const NoiseModel& noise,
                             const std::vector<int>& s);

FeasibilityReport feasibility_margin(const InteractionMatrix& a, const NoiseModel& noise,
                                     const std::vector<int>& s);

/// Smallest exogenous variance that makes the feasibility inequality hold:
/// max(0, Osc(Off(Sigma_x)) / rhs - sigma_gap_sq).
double min_exogenous_variance(const InteractionMatrix& a, const NoiseModel& noise);

/// Classifies pair (i,j) connected iff the symmetrized value exceeds the
/// threshold; the diagonal is excluded.
BoolMatrix threshold_support(const MatrixEstimate& est, double threshold);

/// Midpoint of the widest gap between consecutive sorted values; a simple
/// data-driven threshold for well-separated estimates. Needs >= 2 values.
double largest_gap_threshold(std::span<const double> values);

}  // namespace lagnet
