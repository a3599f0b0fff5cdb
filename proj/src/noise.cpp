#include "lagnet/noise.hpp"

#include <stdexcept>

#include "lagnet/random.hpp"

namespace lagnet {

namespace {

constexpr double kDominanceTol = 1e-10;
constexpr double kPsdTol = 1e-10;

double max_off_diagonal(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  if (n < 2) return 0.0;
  double v = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) v = std::max(v, m(i, j));
    }
  }
  return v;
}

double off_diagonal_mean(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  if (n < 2) return 0.0;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) sum += m(i, j);
    }
  }
  return sum / (static_cast<double>(n) * (n - 1));
}

}  // namespace

NoiseModel NoiseModel::with_exogenous(double xi) const {
  if (xi < 0.0) throw std::invalid_argument("with_exogenous: variance must be nonnegative");
  NoiseModel out = *this;
  out.xi_variance = xi;
  return out;
}

void NoiseModel::validate(double tol) const {
  const int n = dimension();
  if (n < 1 || covariance.cols() != n) throw std::invalid_argument("noise: covariance not square");
  if (sigma_bar.rows() != n || sigma_bar.cols() != n) {
    throw std::invalid_argument("noise: sigma_bar shape mismatch");
  }
  if (!(sigma_sq > 0.0)) throw std::invalid_argument("noise: sigma_sq must be positive");
  if (!(sigma_gap_sq > 0.0)) throw std::invalid_argument("noise: sigma_gap_sq must be positive");
  if (xi_variance < 0.0) throw std::invalid_argument("noise: xi_variance must be nonnegative");
  for (int i = 0; i < n; ++i) {
    if (std::abs(covariance(i, i) - sigma_sq) > tol) {
      throw std::invalid_argument("noise: heterogeneous diagonal");
    }
    for (int j = 0; j < n; ++j) {
      if (i != j && !(covariance(i, j) < sigma_sq)) {
        throw std::invalid_argument("noise: off-diagonal not dominated by the diagonal");
      }
    }
  }
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(n, n);
  const Eigen::MatrixXd recon =
      sigma_gap_sq * Eigen::MatrixXd::Identity(n, n) + beta * ones + sigma_bar;
  if ((recon - covariance).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("noise: decomposition does not reproduce the covariance");
  }
  if (std::abs(off_diagonal_mean(sigma_bar)) > 1e-12) {
    throw std::invalid_argument("noise: sigma_bar off-diagonals not mean-free");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(covariance);
  if (eig.eigenvalues().minCoeff() < -kPsdTol) {
    throw std::invalid_argument("noise: covariance not positive semidefinite");
  }
}

NoiseModel decompose_covariance(const Eigen::MatrixXd& cov) {
  const int n = static_cast<int>(cov.rows());
  if (n < 1 || cov.cols() != n) {
    throw std::invalid_argument("decompose_covariance: matrix not square");
  }
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > kDominanceTol) {
    throw std::invalid_argument("decompose_covariance: matrix not symmetric");
  }
  const double diag_max = cov.diagonal().maxCoeff();
  const double diag_min = cov.diagonal().minCoeff();
  if (diag_max - diag_min > kDominanceTol) {
    throw std::invalid_argument("decompose_covariance: heterogeneous diagonal");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.eigenvalues().minCoeff() < -kPsdTol) {
    throw std::invalid_argument("decompose_covariance: not positive semidefinite");
  }
  NoiseModel model;
  model.covariance = cov;
  model.sigma_sq = cov.diagonal().mean();
  const double max_off = max_off_diagonal(cov);
  model.sigma_gap_sq = model.sigma_sq - max_off;
  if (model.sigma_gap_sq <= kDominanceTol) {
    throw std::invalid_argument(
        "decompose_covariance: off-diagonal ties or exceeds the diagonal");
  }
  model.beta = off_diagonal_mean(cov);
  model.sigma_bar = cov - model.sigma_gap_sq * Eigen::MatrixXd::Identity(n, n) -
                    model.beta * Eigen::MatrixXd::Ones(n, n);
  return model;
}

NoiseModel offset_noise(int n_nodes, double sigma_gap_sq, double beta) {
  if (n_nodes < 1) throw std::invalid_argument("offset_noise: n_nodes must be positive");
  if (!(sigma_gap_sq > 0.0)) {
    throw std::invalid_argument("offset_noise: sigma_gap_sq must be positive");
  }
  if (beta < 0.0) throw std::invalid_argument("offset_noise: beta must be nonnegative");
  NoiseModel model;
  model.covariance = sigma_gap_sq * Eigen::MatrixXd::Identity(n_nodes, n_nodes) +
                     beta * Eigen::MatrixXd::Ones(n_nodes, n_nodes);
  model.sigma_sq = sigma_gap_sq + beta;
  model.sigma_gap_sq = sigma_gap_sq;
  model.beta = n_nodes > 1 ? beta : 0.0;
  model.sigma_bar = Eigen::MatrixXd::Zero(n_nodes, n_nodes);
  if (n_nodes == 1) {
    // No off-diagonals: the beta mass folds into the gap.
    model.sigma_gap_sq = sigma_gap_sq + beta;
  }
  return model;
}

NoiseModel jittered_noise(int n_nodes, double sigma_gap_sq, double beta, double jitter,
                          std::uint64_t seed) {
  if (n_nodes < 2) throw std::invalid_argument("jittered_noise: need at least 2 nodes");
  if (jitter < 0.0) throw std::invalid_argument("jittered_noise: jitter must be nonnegative");
  const NoiseModel base = offset_noise(n_nodes, sigma_gap_sq, beta);
  if (jitter == 0.0) return base;
  for (int attempt = 0; attempt < 100; ++attempt) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(attempt)}));
    Eigen::MatrixXd factor(n_nodes, n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
      for (int j = 0; j < n_nodes; ++j) factor(i, j) = rng.gaussian();
    }
    Eigen::MatrixXd gram = factor * factor.transpose();
    gram.diagonal().setZero();
    const double max_abs = gram.cwiseAbs().maxCoeff();
    if (max_abs == 0.0) continue;
    gram *= jitter / max_abs;
    const double mean = off_diagonal_mean(gram);
    for (int i = 0; i < n_nodes; ++i) {
      for (int j = 0; j < n_nodes; ++j) {
        if (i != j) gram(i, j) -= mean;
      }
    }
    gram = ((gram + gram.transpose()) / 2.0).eval();
    try {
      return decompose_covariance(base.covariance + gram);
    } catch (const std::invalid_argument&) {
      // PSD or dominance failed; resample.
    }
  }
  throw std::runtime_error(
      "jittered_noise: no valid covariance after 100 resamples (jitter too large "
      "relative to sigma_gap_sq)");
}

Eigen::MatrixXd psd_sqrt_factor(const Eigen::MatrixXd& cov) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  Eigen::VectorXd values = eig.eigenvalues();
  for (int i = 0; i < values.size(); ++i) {
    values(i) = values(i) < 1e-12 ? 0.0 : std::sqrt(values(i));
  }
  return eig.eigenvectors() * values.asDiagonal();
}

Eigen::MatrixXd sample_mvn(const Eigen::MatrixXd& cov, long count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample_mvn: count must be positive");
  const int n = static_cast<int>(cov.rows());
  const Eigen::MatrixXd factor = psd_sqrt_factor(cov);
  Rng rng(seed);
  Eigen::MatrixXd draws(count, n);
  Eigen::VectorXd z(n);
  for (long row = 0; row < count; ++row) {
    for (int i = 0; i < n; ++i) z(i) = rng.gaussian();
    draws.row(row) = (factor * z).transpose();
  }
  return draws;
}

Eigen::MatrixXd sample_noise(const NoiseModel& model, long count, std::uint64_t seed) {
  return sample_mvn(model.covariance, count, seed);
}

}  // namespace lagnet
