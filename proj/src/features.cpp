#include "lagnet/features.hpp"

#include <stdexcept>
#include <string>

#include "lagnet/estimators.hpp"

namespace lagnet {

Eigen::MatrixXd Scaler::apply(const Eigen::MatrixXd& rows) const {
  if (rows.cols() != mean.size()) {
    throw std::invalid_argument("scaler: dimension mismatch");
  }
  return (rows.rowwise() - mean.transpose()).array().rowwise() /
         scale.transpose().array();
}

std::vector<std::pair<int, int>> ordered_pairs(const std::vector<int>& observed) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(observed.size() * (observed.size() - 1));
  for (int i : observed) {
    for (int j : observed) {
      if (i != j) pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

namespace {

FeatureSet from_lag_matrices(const LagMoments& moments,
                             const std::vector<Eigen::MatrixXd>& per_lag, FeatureKind kind) {
  FeatureSet fs;
  fs.kind = kind;
  fs.min_lag = moments.min_lag;
  fs.max_lag = moments.max_lag;
  fs.pairs = ordered_pairs(moments.observed);
  const int dim = moments.dimension();
  fs.features.resize(static_cast<long>(fs.pairs.size()), moments.lag_count());
  long row = 0;
  for (int oi = 0; oi < dim; ++oi) {
    for (int oj = 0; oj < dim; ++oj) {
      if (oi == oj) continue;
      for (int k = 0; k < moments.lag_count(); ++k) {
        fs.features(row, k) = per_lag[static_cast<std::size_t>(k)](oi, oj);
      }
      ++row;
    }
  }
  return fs;
}

}  // namespace

FeatureSet build_f(const LagMoments& moments) {
  return from_lag_matrices(moments, moments.matrices, FeatureKind::f);
}

FeatureSet build_t(const LagMoments& moments) {
  std::vector<Eigen::MatrixXd> inverted;
  inverted.reserve(moments.matrices.size());
  for (int lag = moments.min_lag; lag <= moments.max_lag; ++lag) {
    try {
      inverted.push_back(invert_with_ridge(moments.at(lag)));
    } catch (const std::exception& e) {
      throw std::runtime_error("build_t: inversion failed at lag " + std::to_string(lag) +
                               ": " + e.what());
    }
  }
  return from_lag_matrices(moments, inverted, FeatureKind::t);
}

FeatureSet build_k(const FeatureSet& f, const FeatureSet& t) {
  if (f.kind != FeatureKind::f || t.kind != FeatureKind::t) {
    throw std::invalid_argument("build_k: arguments must be (f, t) in that order");
  }
  if (f.pairs != t.pairs) throw std::invalid_argument("build_k: pair lists differ");
  if (f.min_lag != t.min_lag || f.max_lag != t.max_lag) {
    throw std::invalid_argument("build_k: lag ranges differ");
  }
  FeatureSet fs;
  fs.kind = FeatureKind::k;
  fs.min_lag = f.min_lag;
  fs.max_lag = f.max_lag;
  fs.pairs = f.pairs;
  fs.labels = f.labels.empty() ? t.labels : f.labels;
  fs.features.resize(f.features.rows(), f.features.cols() + t.features.cols());
  fs.features << f.features, t.features;
  return fs;
}

FeatureSet fit_scaler(const FeatureSet& fs) {
  if (fs.pair_count() < 2) throw std::invalid_argument("fit_scaler: need >= 2 pairs");
  Scaler scaler;
  scaler.mean = fs.features.colwise().mean();
  const Eigen::MatrixXd centered = fs.features.rowwise() - scaler.mean.transpose();
  // Population deviation; degenerate dimensions are centered only.
  Eigen::VectorXd variance =
      centered.array().square().colwise().mean().matrix().transpose();
  scaler.scale.resize(variance.size());
  for (int d = 0; d < variance.size(); ++d) {
    const double dev = std::sqrt(variance(d));
    scaler.scale(d) = dev < 1e-15 ? 1.0 : dev;
  }
  FeatureSet out = fs;
  out.features = centered.array().rowwise() / scaler.scale.transpose().array();
  out.scaler = scaler;
  return out;
}

FeatureSet apply_scaler(const FeatureSet& fs, const Scaler& scaler) {
  if (fs.feature_dim() != scaler.dimension()) {
    throw std::invalid_argument("apply_scaler: dimension mismatch");
  }
  FeatureSet out = fs;
  out.features = scaler.apply(fs.features);
  out.scaler = scaler;
  return out;
}

}  // namespace lagnet
