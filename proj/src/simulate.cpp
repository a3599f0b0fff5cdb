#include "lagnet/simulate.hpp"

#include <stdexcept>

#include "lagnet/random.hpp"

namespace lagnet {

void TimeSeries::validate() const {
  if (samples.rows() < 1) throw std::invalid_argument("time series: no samples");
  if (observed.empty()) throw std::invalid_argument("time series: observed set empty");
  if (static_cast<long>(observed.size()) != samples.cols()) {
    throw std::invalid_argument("time series: observed/column mismatch");
  }
  for (std::size_t k = 0; k < observed.size(); ++k) {
    if (observed[k] < 0) throw std::invalid_argument("time series: negative node id");
    if (k > 0 && observed[k] <= observed[k - 1]) {
      throw std::invalid_argument("time series: observed set not strictly increasing");
    }
  }
}

TimeSeries simulate_linear(const Eigen::MatrixXd& a, const Eigen::MatrixXd& noise_cov,
                           double xi_variance, long n, const SimConfig& cfg) {
  const int dim = static_cast<int>(a.rows());
  if (a.cols() != dim) throw std::invalid_argument("simulate: coupling matrix not square");
  if (noise_cov.rows() != dim || noise_cov.cols() != dim) {
    throw std::invalid_argument("simulate: noise dimension mismatch");
  }
  if (n < 1) throw std::invalid_argument("simulate: n must be positive");
  if (cfg.burn_in < 0 || cfg.extra_tail < 0) {
    throw std::invalid_argument("simulate: negative burn_in or extra_tail");
  }

  const Eigen::MatrixXd factor = psd_sqrt_factor(noise_cov);
  Rng noise_rng(derive_seed(cfg.seed, {0}));
  Rng exo_rng(derive_seed(cfg.seed, {1}));
  const double xi_std = xi_variance > 0.0 ? std::sqrt(xi_variance) : 0.0;

  const long keep = n + cfg.extra_tail;
  TimeSeries ts;
  ts.samples.resize(keep, dim);
  ts.observed.resize(dim);
  for (int i = 0; i < dim; ++i) ts.observed[i] = i;

  Eigen::VectorXd state = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd z(dim);
  const long total = cfg.burn_in + keep;
  for (long step = 1; step <= total; ++step) {
    for (int i = 0; i < dim; ++i) z(i) = noise_rng.gaussian();
    state = a * state + factor * z;
    if (xi_std > 0.0) {
      for (int i = 0; i < dim; ++i) state(i) += xi_std * exo_rng.gaussian();
    }
    if (step > cfg.burn_in) ts.samples.row(step - cfg.burn_in - 1) = state.transpose();
  }
  return ts;
}

TimeSeries simulate(const InteractionMatrix& a, const NoiseModel& noise, long n,
                    const SimConfig& cfg) {
  return simulate_linear(a.entries, noise.covariance, noise.xi_variance, n, cfg);
}

TimeSeries restrict_series(const TimeSeries& ts, const std::vector<int>& s) {
  if (s.empty()) throw std::invalid_argument("restrict: empty index set");
  std::vector<int> positions;
  positions.reserve(s.size());
  std::size_t cursor = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k > 0 && s[k] <= s[k - 1]) {
      throw std::invalid_argument("restrict: index set must be strictly increasing");
    }
    while (cursor < ts.observed.size() && ts.observed[cursor] < s[k]) ++cursor;
    if (cursor == ts.observed.size() || ts.observed[cursor] != s[k]) {
      throw std::invalid_argument("restrict: node " + std::to_string(s[k]) +
                                  " is not observed");
    }
    positions.push_back(static_cast<int>(cursor));
  }
  TimeSeries out;
  out.observed = s;
  out.samples.resize(ts.samples.rows(), static_cast<long>(positions.size()));
  for (std::size_t k = 0; k < positions.size(); ++k) {
    out.samples.col(static_cast<long>(k)) = ts.samples.col(positions[k]);
  }
  return out;
}

}  // namespace lagnet
