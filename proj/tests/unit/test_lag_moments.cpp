#include <doctest.h>

#include "lagnet/lag_moments.hpp"
#include "support.hpp"

using namespace lagnet;

namespace {

TimeSeries scalar_series(std::initializer_list<double> values) {
  TimeSeries ts;
  ts.observed = {0};
  ts.samples.resize(static_cast<long>(values.size()), 1);
  long r = 0;
  for (double v : values) ts.samples(r++, 0) = v;
  return ts;
}

}  // namespace

TEST_SUITE("lag_moments") {

TEST_CASE("constant series has unit moments at every lag") {
  TimeSeries ts;
  ts.observed = {0};
  ts.samples = Eigen::MatrixXd::Ones(13, 1);  // n = 10 once the tail of 3 is held out
  const LagMoments m = empirical_lag_moments(ts, -3, 3);
  CHECK(m.sample_count == 10);
  for (int k = -3; k <= 3; ++k) CHECK(m.at(k)(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("hand-computed scalar lag sum") {
  const TimeSeries ts = scalar_series({1, 2});
  const LagMoments m = empirical_lag_moments(ts, 1, 1);
  CHECK(m.sample_count == 1);
  CHECK(m.at(1)(0, 0) == 2.0);  // (1/1) * y(1) y(0)
}

TEST_CASE("insufficient samples are rejected") {
  const TimeSeries ts = scalar_series({1, 2});
  CHECK_THROWS_WITH_AS(empirical_lag_moments(ts, 0, 3), doctest::Contains("insufficient"),
                       std::invalid_argument);
  CHECK_THROWS_AS(empirical_lag_moments(ts, 2, 3), std::invalid_argument);  // min_lag > 1
}

TEST_CASE("negative lags are exact transposes") {
  const Graph g = erdos_renyi(4, 0.6, 1);
  const InteractionMatrix a = laplacian_weights(g, 0.7);
  const NoiseModel noise = offset_noise(4, 1.0, 0.5);
  SimConfig cfg;
  cfg.seed = 6;
  cfg.extra_tail = 5;
  const TimeSeries ts = simulate(a, noise, 2000, cfg);
  const LagMoments m = empirical_lag_moments(ts, -5, 5);
  for (int k = 1; k <= 5; ++k) {
    CHECK(m.at(-k) == m.at(k).transpose());  // bitwise
  }
}

TEST_CASE("lag-0 moment is symmetric PSD") {
  const Graph g = erdos_renyi(6, 0.5, 9);
  const InteractionMatrix a = laplacian_weights(g, 0.8);
  const NoiseModel noise = offset_noise(6, 1.0, 1.0);
  SimConfig cfg;
  cfg.seed = 10;
  cfg.extra_tail = 3;
  const TimeSeries ts = simulate(a, noise, 500, cfg);
  const LagMoments m = empirical_lag_moments(ts, 0, 3);
  CHECK(testsupport::max_abs(m.at(0) - m.at(0).transpose()) <= 1e-9);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.at(0));
  CHECK(eig.eigenvalues().minCoeff() >= -1e-9);
}

TEST_CASE("stationary_covariance closed forms") {
  SUBCASE("decoupled system returns the effective covariance") {
    const InteractionMatrix a = InteractionMatrix::zero(3);
    const NoiseModel noise = offset_noise(3, 1.0, 2.0);
    CHECK(testsupport::max_abs(stationary_covariance(a, noise) - noise.covariance) <= 1e-13);
    const NoiseModel excited = noise.with_exogenous(0.5);
    CHECK(testsupport::max_abs(stationary_covariance(a, excited) -
                               (noise.covariance + 0.5 * Eigen::MatrixXd::Identity(3, 3))) <=
          1e-13);
  }
  SUBCASE("scalar geometric series") {
    Graph g;
    g.node_count = 1;
    g.adjacency = BoolMatrix::Constant(1, 1, false);
    const InteractionMatrix a = laplacian_weights(g, 0.5);
    const NoiseModel noise = decompose_covariance(Eigen::MatrixXd::Identity(1, 1));
    CHECK(stationary_covariance(a, noise)(0, 0) ==
          doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("triangle fixed-point residual") {
    Graph triangle;
    triangle.node_count = 3;
    triangle.adjacency = BoolMatrix::Constant(3, 3, true);
    triangle.adjacency.diagonal().setConstant(false);
    const InteractionMatrix a = laplacian_weights(triangle, 0.9);
    const NoiseModel noise = offset_noise(3, 1.0, 0.0);
    const Eigen::MatrixXd r0 = stationary_covariance(a, noise);
    const Eigen::MatrixXd residual = a.entries * r0 * a.entries + noise.covariance - r0;
    CHECK(testsupport::max_abs(residual) <= 1e-11);
  }
}

TEST_CASE("analytic_lag_moment powers") {
  const InteractionMatrix zero = InteractionMatrix::zero(2);
  const NoiseModel noise = offset_noise(2, 1.0, 0.0);
  const Eigen::MatrixXd r0 = stationary_covariance(zero, noise);
  CHECK(analytic_lag_moment(zero, r0, 0) == r0);
  CHECK(testsupport::max_abs(analytic_lag_moment(zero, r0, 1)) == 0.0);

  Graph g;
  g.node_count = 1;
  g.adjacency = BoolMatrix::Constant(1, 1, false);
  const InteractionMatrix a = laplacian_weights(g, 0.5);
  const NoiseModel scalar_noise = decompose_covariance(Eigen::MatrixXd::Identity(1, 1));
  const Eigen::MatrixXd s0 = stationary_covariance(a, scalar_noise);
  CHECK(analytic_lag_moment(a, s0, 3)(0, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("empirical moments converge to the analytic oracle") {
  const Graph g = erdos_renyi(3, 0.8, 2);
  const InteractionMatrix a = laplacian_weights(g, 0.5);
  const NoiseModel noise = offset_noise(3, 1.0, 0.25);
  const LagMoments analytic = analytic_lag_moments(a, noise, 0, 3);

  SUBCASE("max-abs deviation at n = 2e5") {
    std::vector<double> errs;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      SimConfig cfg;
      cfg.seed = seed;
      cfg.extra_tail = 3;
      const TimeSeries ts = simulate(a, noise, 200000, cfg);
      const LagMoments emp = empirical_lag_moments(ts, 0, 3);
      double worst = 0.0;
      for (int k = 0; k <= 3; ++k) {
        worst = std::max(worst, testsupport::max_abs(emp.at(k) - analytic.at(k)));
      }
      errs.push_back(worst);
    }
    CHECK(testsupport::median(errs) <= 0.02);
  }

  SUBCASE("error decreases with the sample count") {
    std::vector<double> medians;
    for (long n : {1000L, 10000L, 100000L}) {
      std::vector<double> errs;
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SimConfig cfg;
        cfg.seed = seed;
        cfg.extra_tail = 3;
        const TimeSeries ts = simulate(a, noise, n, cfg);
        const LagMoments emp = empirical_lag_moments(ts, 0, 3);
        errs.push_back(testsupport::max_abs(emp.at(1) - analytic.at(1)));
      }
      medians.push_back(testsupport::median(errs));
    }
    CHECK(medians[1] < medians[0]);
    CHECK(medians[2] < medians[1]);
  }
}

TEST_CASE("restriction selects submatrices") {
  const Graph g = erdos_renyi(5, 0.7, 4);
  const InteractionMatrix a = laplacian_weights(g, 0.6);
  const NoiseModel noise = offset_noise(5, 1.0, 0.0);
  const LagMoments full = analytic_lag_moments(a, noise, -2, 3);
  const LagMoments sub = full.restricted({1, 3});
  CHECK(sub.dimension() == 2);
  for (int k = -2; k <= 3; ++k) {
    CHECK(sub.at(k)(0, 1) == full.at(k)(1, 3));
    CHECK(sub.at(k)(1, 0) == full.at(k)(3, 1));
  }
  CHECK_THROWS_AS(full.restricted({0, 7}), std::invalid_argument);
}

}  // TEST_SUITE
