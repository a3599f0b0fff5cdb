#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "lagnet/lag_moments.hpp"

namespace lagnet {

enum class FeatureKind { f, t, k };

/// Per-dimension standard scaler (population deviation). Dimensions with
/// deviation below 1e-15 are centered only (scale 1).
struct Scaler {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;

  int dimension() const { return static_cast<int>(mean.size()); }
  Eigen::MatrixXd apply(const Eigen::MatrixXd& rows) const;
};

/// Per-pair feature vectors over the ordered pairs (i, j), i != j, of the
/// observed set. kind f: entries of the lag moments in lag order; kind t:
/// entries of the inverted lag moments; kind k: f followed by t.
struct FeatureSet {
  FeatureKind kind = FeatureKind::f;
  int min_lag = 0;
  int max_lag = 0;
  std::vector<std::pair<int, int>> pairs;
  Eigen::MatrixXd features;            // one row per pair
  std::vector<std::uint8_t> labels;    // empty when unlabeled
  std::optional<Scaler> scaler;        // set once scaled

  long pair_count() const { return static_cast<long>(pairs.size()); }
  int feature_dim() const { return static_cast<int>(features.cols()); }
};

/// Canonical pair order used by features and labels: i outer, j inner over
/// the observed set, skipping i == j.
std::vector<std::pair<int, int>> ordered_pairs(const std::vector<int>& observed);

/// f-vector of (i, j): [R_k]_ij for k = min_lag..max_lag.
FeatureSet build_f(const LagMoments& moments);

/// t-vector of (i, j): [([R_k]_S)^{-1}]_ij per lag, sharing the ridge policy
/// of the matrix estimators. Reports the offending lag on inversion failure.
FeatureSet build_t(const LagMoments& moments);

/// k-vector: concatenation (f, t). Pair lists and lag ranges must match.
FeatureSet build_k(const FeatureSet& f, const FeatureSet& t);

/// Fits a standard scaler on the rows and returns the scaled set with the
/// scaler retained for reuse on unseen data. Needs >= 2 pairs; never touches
/// pair order or labels.
FeatureSet fit_scaler(const FeatureSet& fs);

/// Applies a previously fitted scaler (dimensions must match).
FeatureSet apply_scaler(const FeatureSet& fs, const Scaler& scaler);

}  // namespace lagnet
