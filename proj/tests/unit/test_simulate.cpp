#include <doctest.h>

#include "lagnet/lag_moments.hpp"
#include "lagnet/simulate.hpp"
#include "support.hpp"

using namespace lagnet;

namespace {

InteractionMatrix scalar_coupling(double a) {
  Graph g;
  g.node_count = 1;
  g.adjacency = BoolMatrix::Constant(1, 1, false);
  return laplacian_weights(g, a);  // A_bar = I, so A = [a]
}

}  // namespace

TEST_SUITE("simulate") {

TEST_CASE("decoupled system produces white noise") {
  const InteractionMatrix a = InteractionMatrix::zero(4);
  const NoiseModel noise = offset_noise(4, 1.0, 0.0);
  SimConfig cfg;
  cfg.seed = 5;
  cfg.extra_tail = 3;
  const TimeSeries ts = simulate(a, noise, 10000, cfg);
  const LagMoments moments = empirical_lag_moments(ts, 0, 3);
  CHECK(testsupport::max_abs(moments.at(1)) <= 0.05);
  CHECK(testsupport::max_abs(moments.at(0) - Eigen::MatrixXd::Identity(4, 4)) <= 0.1);
}

TEST_CASE("zero noise keeps the trajectory at the origin") {
  const Eigen::MatrixXd a = 0.5 * Eigen::MatrixXd::Identity(3, 3);
  SimConfig cfg;
  cfg.seed = 2;
  const TimeSeries ts = simulate_linear(a, Eigen::MatrixXd::Zero(3, 3), 0.0, 100, cfg);
  CHECK(testsupport::max_abs(ts.samples) == 0.0);
}

TEST_CASE("scalar AR(1) stationary variance") {
  const InteractionMatrix a = scalar_coupling(0.5);
  const NoiseModel noise = decompose_covariance(Eigen::MatrixXd::Identity(1, 1));
  SimConfig cfg;
  cfg.seed = 31;
  const TimeSeries ts = simulate(a, noise, 100000, cfg);
  const double mean = ts.samples.col(0).mean();
  const double var = (ts.samples.col(0).array() - mean).square().mean();
  const double expected = 1.0 / (1.0 - 0.25);  // 4/3
  CHECK(var >= expected * 0.97);
  CHECK(var <= expected * 1.03);
}

TEST_CASE("simulation is deterministic and rejects mismatched dimensions") {
  const InteractionMatrix a = InteractionMatrix::zero(3);
  const NoiseModel noise = offset_noise(3, 1.0, 1.0);
  SimConfig cfg;
  cfg.seed = 77;
  const TimeSeries t1 = simulate(a, noise, 500, cfg);
  const TimeSeries t2 = simulate(a, noise, 500, cfg);
  CHECK(t1.samples == t2.samples);

  const NoiseModel wrong = offset_noise(4, 1.0, 1.0);
  CHECK_THROWS_AS(simulate(a, wrong, 100, cfg), std::invalid_argument);
}

TEST_CASE("restrict keeps columns in order") {
  const InteractionMatrix a = InteractionMatrix::zero(3);
  const NoiseModel noise = offset_noise(3, 1.0, 0.0);
  SimConfig cfg;
  cfg.seed = 4;
  const TimeSeries ts = simulate(a, noise, 50, cfg);

  SUBCASE("identity restriction") {
    const TimeSeries same = restrict_series(ts, {0, 1, 2});
    CHECK(same.samples == ts.samples);
  }
  SUBCASE("composition") {
    const TimeSeries once = restrict_series(ts, {0, 2});
    const TimeSeries twice = restrict_series(restrict_series(ts, {0, 1, 2}), {0, 2});
    CHECK(once.samples == twice.samples);
    CHECK(once.observed == std::vector<int>{0, 2});
    CHECK(once.samples.col(0) == ts.samples.col(0));
    CHECK(once.samples.col(1) == ts.samples.col(2));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(restrict_series(ts, {}), std::invalid_argument);
    CHECK_THROWS_AS(restrict_series(ts, {0, 3}), std::invalid_argument);
    const TimeSeries sub = restrict_series(ts, {0, 2});
    CHECK_THROWS_AS(restrict_series(sub, {1}), std::invalid_argument);
  }
}

TEST_CASE("exogenous excitation enlarges the stationary variance") {
  const InteractionMatrix a = scalar_coupling(0.5);
  const NoiseModel noise =
      decompose_covariance(Eigen::MatrixXd::Identity(1, 1)).with_exogenous(1.0);
  SimConfig cfg;
  cfg.seed = 8;
  const TimeSeries ts = simulate(a, noise, 100000, cfg);
  const double mean = ts.samples.col(0).mean();
  const double var = (ts.samples.col(0).array() - mean).square().mean();
  const double expected = 2.0 / (1.0 - 0.25);  // (sigma^2 + xi^2) / (1 - a^2)
  CHECK(var >= expected * 0.95);
  CHECK(var <= expected * 1.05);
}

TEST_CASE("halves of a long trajectory share their covariance") {
  // Stationarity: the first and second halves differ by at most 3x a CLT-style
  // band, in median over 10 seeds.
  const Graph g = erdos_renyi(5, 0.5, 3);
  const InteractionMatrix a = laplacian_weights(g, 0.8);
  const NoiseModel noise = offset_noise(5, 1.0, 1.0);
  const long n = 100000;
  const Eigen::MatrixXd r0 = stationary_covariance(a, noise);
  const double scale = r0.cwiseAbs().maxCoeff();
  const double band =
      3.0 * scale * std::sqrt(2.0 * (1 + 0.64) / (1 - 0.64) / static_cast<double>(n / 2));
  std::vector<double> diffs;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SimConfig cfg;
    cfg.seed = seed;
    cfg.extra_tail = 0;
    const TimeSeries ts = simulate(a, noise, n, cfg);
    const long half = n / 2;
    const Eigen::MatrixXd first = ts.samples.topRows(half);
    const Eigen::MatrixXd second = ts.samples.bottomRows(half);
    const Eigen::MatrixXd c1 = first.transpose() * first / static_cast<double>(half);
    const Eigen::MatrixXd c2 = second.transpose() * second / static_cast<double>(half);
    diffs.push_back(testsupport::max_abs(c1 - c2));
  }
  CHECK(testsupport::median(diffs) <= band);
}

}  // TEST_SUITE
