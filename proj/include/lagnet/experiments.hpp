#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lagnet/classifiers.hpp"
#include "lagnet/features.hpp"
#include "lagnet/graph.hpp"

namespace lagnet {

enum class SweepAxis { observed_count, connection_p, beta, sample_count };

std::string to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string& name);

/// Everything a sweep cell needs besides the axis value. The axis overrides
/// the matching field.
struct FrozenParams {
  int n_nodes = 30;
  double connection_p = 0.7;
  double rho = 0.8;
  int observed_count = 20;
  double beta = 0.0;
  double jitter = 0.0;
  double sigma_gap_sq = 1.0;
  long sample_count = 100000;
  int seeds_per_cell = 5;
  std::vector<std::string> estimators{"one_lag_gmm", "nig_gmm", "precision_gmm",
                                      "granger_gmm", "ffnn_k"};
  int min_lag = -50;
  int max_lag = 50;
  int burn_in = 1000;
  std::uint64_t master_seed = 1;
  bool analytic_moments = false;  // shortcut mode: skip simulation, use model moments
  int threads = 0;                // 0 = hardware concurrency
};

struct SweepConfig {
  SweepAxis axis = SweepAxis::beta;
  std::vector<double> axis_values;
  FrozenParams frozen;
  std::string output_path;  // report CSV; empty keeps results in memory
};

struct AccuracyRow {
  double axis_value = 0.0;
  std::string estimator;
  int seed_index = 0;
  std::uint64_t derived_seed = 0;
  double accuracy = 0.0;
  std::string error;  // nonempty marks a failed cell
};

struct AccuracyAggregate {
  double axis_value = 0.0;
  std::string estimator;
  double median = 0.0;
  double iqr_low = 0.0;
  double iqr_high = 0.0;
  int cells_ok = 0;
};

struct AccuracyReport {
  std::vector<AccuracyRow> rows;
  std::vector<AccuracyAggregate> aggregates;
};

/// Trained networks available to feature-based estimators.
struct ModelSet {
  const MlpModel* ffnn_k = nullptr;
  const MlpModel* ffnn_f = nullptr;

  const MlpModel* for_estimator(const std::string& name) const;
};

/// Fraction of unordered observed-node pairs labeled identically by the two
/// symmetric boolean matrices.
double accuracy(const BoolMatrix& predicted, const BoolMatrix& truth);

/// Training-set construction: one Erdos-Renyi realization, one dataset per
/// beta on the grid, features pooled across datasets, one scaler fitted on
/// the pool.
struct CorpusConfig {
  int n_nodes = 50;
  double connection_p = 0.5;
  double rho = 0.8;
  double sigma_gap_sq = 1.0;
  std::vector<double> betas{0, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
  long sample_count = 100000;  // desk scale; 500000 reproduces the full protocol
  int min_lag = -50;
  int max_lag = 50;
  int burn_in = 1000;
  FeatureKind kind = FeatureKind::k;
};

FeatureSet build_training_corpus(std::uint64_t seed, const CorpusConfig& cfg = {});

/// One sweep cell: graph -> weights -> noise -> trajectory (or analytic
/// moments) -> restriction to a seeded node subset -> estimator pipeline ->
/// accuracy against the ground truth. Failures are captured in the row.
AccuracyRow evaluate_cell(const FrozenParams& frozen, SweepAxis axis, double axis_value,
                          const std::string& estimator, int seed_index,
                          std::uint64_t derived_seed, const ModelSet& models);

/// Evaluates every (axis value x estimator x seed) cell; cell seeds derive
/// from (master seed, axis index, estimator index, replicate) so results are
/// independent of execution order. Writes the report CSV and a .meta.json
/// manifest when output_path is set.
AccuracyReport run_sweep(const SweepConfig& cfg, const ModelSet& models = {});

}  // namespace lagnet
