#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "lagnet/graph.hpp"
#include "lagnet/noise.hpp"

namespace lagnet {

struct SimConfig {
  int burn_in = 1000;
  int extra_tail = 50;  // trailing samples so lag sums stay computable verbatim
  std::uint64_t seed = 0;
};

/// Trajectory of the networked system; row l is the state y(l). Columns
/// follow `observed`, a strictly increasing subset of node ids.
struct TimeSeries {
  Eigen::MatrixXd samples;
  std::vector<int> observed;

  long sample_count() const { return samples.rows(); }
  void validate() const;
};

/// Iterates y(l+1) = A y(l) + x(l+1) [+ xi(l+1)] from y(0) = 0, drops the
/// first burn_in states and returns n + extra_tail rows over all nodes.
/// xi ~ N(0, xi_variance * I) is drawn iff noise.xi_variance > 0, from a
/// stream independent of x.
TimeSeries simulate(const InteractionMatrix& a, const NoiseModel& noise, long n,
                    const SimConfig& cfg);

/// Engine behind simulate(); takes a raw coupling matrix and covariance so
/// degenerate systems (zero noise, zero coupling) can be driven directly.
TimeSeries simulate_linear(const Eigen::MatrixXd& a, const Eigen::MatrixXd& noise_cov,
                           double xi_variance, long n, const SimConfig& cfg);

/// Keeps only the columns of nodes in s (a subset of ts.observed).
TimeSeries restrict_series(const TimeSeries& ts, const std::vector<int>& s);

}  // namespace lagnet
