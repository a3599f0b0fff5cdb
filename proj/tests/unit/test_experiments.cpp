#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "lagnet/experiments.hpp"
#include "lagnet/io.hpp"
#include "support.hpp"

using namespace lagnet;

namespace {

// Graph over 25 nodes (300 pairs) with exactly `connected` edges.
BoolMatrix exact_fraction_truth(int connected) {
  BoolMatrix truth = BoolMatrix::Constant(25, 25, false);
  int placed = 0;
  for (int i = 0; i < 25 && placed < connected; ++i) {
    for (int j = i + 1; j < 25 && placed < connected; ++j) {
      truth(i, j) = truth(j, i) = true;
      ++placed;
    }
  }
  return truth;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("accuracy bookkeeping") {
  SUBCASE("perfect prediction") {
    const BoolMatrix truth = exact_fraction_truth(100);
    CHECK(accuracy(truth, truth) == 1.0);
  }
  SUBCASE("all-negative base rates from the connection fraction") {
    const BoolMatrix none = BoolMatrix::Constant(25, 25, false);
    // 67% of 300 pairs connected -> all-disconnected scores 0.33.
    CHECK(accuracy(none, exact_fraction_truth(201)) == doctest::Approx(0.33).epsilon(1e-12));
    // 20% connected -> 0.80.
    CHECK(accuracy(none, exact_fraction_truth(60)) == doctest::Approx(0.80).epsilon(1e-12));
  }
  SUBCASE("mismatched pair sets are rejected") {
    const BoolMatrix small = BoolMatrix::Constant(3, 3, false);
    const BoolMatrix large = BoolMatrix::Constant(4, 4, false);
    CHECK_THROWS_AS(accuracy(small, large), std::invalid_argument);
  }
}

TEST_CASE("build_training_corpus smoke run at tiny scale") {
  CorpusConfig cfg;
  cfg.sample_count = 1000;
  const FeatureSet corpus = build_training_corpus(3, cfg);
  // 11 datasets x 50*49 ordered pairs.
  CHECK(corpus.pair_count() == 11 * 50 * 49);
  CHECK(corpus.feature_dim() == 2 * 101);
  CHECK(corpus.labels.size() == static_cast<std::size_t>(corpus.pair_count()));
  CHECK(corpus.scaler.has_value());

  // The pipeline trains end to end and reports a training accuracy.
  TrainConfig train_cfg;
  train_cfg.seed = 1;
  train_cfg.epochs = 3;
  const MlpModel model = train_ffnn(corpus, train_cfg);
  // The corpus features are already scaled, so predict without re-scaling.
  MlpModel unscaled_model = model;
  unscaled_model.scaler.reset();
  const PredictionSet pred = ffnn_predict(unscaled_model, corpus);
  long correct = 0;
  for (std::size_t i = 0; i < pred.decisions.size(); ++i) {
    if (pred.decisions[i] == corpus.labels[i]) ++correct;
  }
  const double train_acc =
      static_cast<double>(correct) / static_cast<double>(corpus.pair_count());
  CHECK(train_acc >= 0.0);
  CHECK(train_acc <= 1.0);
}

TEST_CASE("evaluate_cell") {
  FrozenParams frozen;
  frozen.n_nodes = 10;
  frozen.observed_count = 10;
  frozen.connection_p = 0.5;
  frozen.beta = 0.0;
  frozen.analytic_moments = true;

  SUBCASE("granger at the analytic limit under full observability is exact") {
    const AccuracyRow row =
        evaluate_cell(frozen, SweepAxis::beta, 0.0, "granger_gmm", 0, 42, {});
    REQUIRE(row.error.empty());
    CHECK(row.accuracy == 1.0);
  }
  SUBCASE("cells are deterministic per seed") {
    const AccuracyRow a =
        evaluate_cell(frozen, SweepAxis::beta, 0.0, "nig_gmm", 0, 7, {});
    const AccuracyRow b =
        evaluate_cell(frozen, SweepAxis::beta, 0.0, "nig_gmm", 0, 7, {});
    REQUIRE(a.error.empty());
    CHECK(a.accuracy == b.accuracy);
    CHECK(a.accuracy >= 0.0);
    CHECK(a.accuracy <= 1.0);
  }
  SUBCASE("failures are captured, not thrown") {
    FrozenParams bad = frozen;
    bad.observed_count = 50;  // larger than n_nodes
    const AccuracyRow row =
        evaluate_cell(bad, SweepAxis::beta, 0.0, "nig_gmm", 0, 1, {});
    CHECK_FALSE(row.error.empty());
  }
}

TEST_CASE("run_sweep produces a complete, reproducible report") {
  SweepConfig cfg;
  cfg.axis = SweepAxis::beta;
  cfg.axis_values = {0.0, 25.0, 50.0};
  cfg.frozen.n_nodes = 10;
  cfg.frozen.observed_count = 8;
  cfg.frozen.connection_p = 0.5;
  cfg.frozen.seeds_per_cell = 3;
  cfg.frozen.estimators = {"nig_gmm", "one_lag_gmm"};
  cfg.frozen.analytic_moments = true;
  cfg.frozen.master_seed = 5;

  const AccuracyReport report = run_sweep(cfg);
  CHECK(report.rows.size() == 3 * 2 * 3);  // axis x estimator x seeds

  // Every cell appears exactly once.
  for (double axis : cfg.axis_values) {
    for (const std::string& est : cfg.frozen.estimators) {
      for (int seed = 0; seed < 3; ++seed) {
        int found = 0;
        for (const AccuracyRow& row : report.rows) {
          if (row.axis_value == axis && row.estimator == est && row.seed_index == seed) {
            ++found;
          }
        }
        CHECK(found == 1);
      }
    }
  }

  // Independent of parallelism.
  SweepConfig serial = cfg;
  serial.frozen.threads = 1;
  SweepConfig parallel = cfg;
  parallel.frozen.threads = 4;
  const AccuracyReport r1 = run_sweep(serial);
  const AccuracyReport r2 = run_sweep(parallel);
  REQUIRE(r1.rows.size() == r2.rows.size());
  for (std::size_t i = 0; i < r1.rows.size(); ++i) {
    CHECK(r1.rows[i].axis_value == r2.rows[i].axis_value);
    CHECK(r1.rows[i].estimator == r2.rows[i].estimator);
    CHECK(r1.rows[i].accuracy == r2.rows[i].accuracy);
  }

  // Aggregates cover every (axis, estimator) key.
  CHECK(report.aggregates.size() == 3 * 2);
  for (const AccuracyAggregate& agg : report.aggregates) {
    CHECK(agg.cells_ok == 3);
    CHECK(agg.iqr_low <= agg.median);
    CHECK(agg.median <= agg.iqr_high);
  }
}

TEST_CASE("run_sweep records failed cells and keeps going") {
  SweepConfig cfg;
  cfg.axis = SweepAxis::observed_count;
  cfg.axis_values = {4.0, 50.0};  // 50 exceeds n_nodes -> error marker
  cfg.frozen.n_nodes = 8;
  cfg.frozen.connection_p = 0.6;
  cfg.frozen.seeds_per_cell = 2;
  cfg.frozen.estimators = {"nig_gmm"};
  cfg.frozen.analytic_moments = true;

  const AccuracyReport report = run_sweep(cfg);
  CHECK(report.rows.size() == 4);
  int failed = 0;
  for (const AccuracyRow& row : report.rows) {
    if (!row.error.empty()) {
      ++failed;
      CHECK(row.axis_value == 50.0);
    }
  }
  CHECK(failed == 2);
}

TEST_CASE("run_sweep writes the csv and manifest") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "lagnet_sweep_test";
  fs::create_directories(dir);
  SweepConfig cfg;
  cfg.axis = SweepAxis::beta;
  cfg.axis_values = {0.0, 10.0};
  cfg.frozen.n_nodes = 8;
  cfg.frozen.observed_count = 6;
  cfg.frozen.connection_p = 0.5;
  cfg.frozen.seeds_per_cell = 2;
  cfg.frozen.estimators = {"nig_gmm"};
  cfg.frozen.analytic_moments = true;
  cfg.output_path = (dir / "report.csv").string();

  const AccuracyReport report = run_sweep(cfg);
  CHECK(fs::exists(dir / "report.csv"));
  CHECK(fs::exists(dir / "report.meta.json"));

  std::ifstream in(dir / "report.csv");
  const AccuracyReport back = read_report_csv(in);
  REQUIRE(back.rows.size() == report.rows.size());
  for (std::size_t i = 0; i < back.rows.size(); ++i) {
    CHECK(back.rows[i].estimator == report.rows[i].estimator);
    CHECK(back.rows[i].accuracy == doctest::Approx(report.rows[i].accuracy).epsilon(1e-12));
  }
  fs::remove_all(dir);
}

TEST_CASE("feature-based estimators run through evaluate_cell") {
  // Tiny corpus and network: exercises the ffnn_k and ffnn_f_only pipelines.
  CorpusConfig corpus_cfg;
  corpus_cfg.n_nodes = 12;
  corpus_cfg.sample_count = 4000;
  corpus_cfg.min_lag = -5;
  corpus_cfg.max_lag = 5;
  corpus_cfg.betas = {0.0, 5.0};

  TrainConfig train_cfg;
  train_cfg.seed = 3;
  train_cfg.epochs = 10;
  train_cfg.batch_size = 64;
  train_cfg.learning_rate = 1e-2;

  CorpusConfig f_cfg = corpus_cfg;
  f_cfg.kind = FeatureKind::f;
  const MlpModel model_k = train_ffnn(build_training_corpus(2, corpus_cfg), train_cfg);
  const MlpModel model_f = train_ffnn(build_training_corpus(2, f_cfg), train_cfg);
  ModelSet models;
  models.ffnn_k = &model_k;
  models.ffnn_f = &model_f;

  FrozenParams frozen;
  frozen.n_nodes = 12;
  frozen.observed_count = 8;
  frozen.connection_p = 0.5;
  frozen.sample_count = 4000;
  frozen.min_lag = -5;
  frozen.max_lag = 5;
  for (const char* est : {"ffnn_k", "ffnn_f_only"}) {
    const AccuracyRow row = evaluate_cell(frozen, SweepAxis::beta, 0.0, est, 0, 99, models);
    INFO(row.error);
    REQUIRE(row.error.empty());
    CHECK(row.accuracy >= 0.0);
    CHECK(row.accuracy <= 1.0);
  }
  // Missing model is a configuration error, captured per cell.
  const AccuracyRow missing =
      evaluate_cell(frozen, SweepAxis::beta, 0.0, "ffnn_k", 0, 99, {});
  CHECK_FALSE(missing.error.empty());
}

TEST_CASE("every sweep axis overrides its parameter") {
  FrozenParams frozen;
  frozen.n_nodes = 9;
  frozen.observed_count = 6;
  frozen.connection_p = 0.4;
  frozen.analytic_moments = true;
  frozen.seeds_per_cell = 1;
  frozen.estimators = {"granger_gmm"};

  for (SweepAxis axis : {SweepAxis::observed_count, SweepAxis::connection_p,
                         SweepAxis::sample_count}) {
    SweepConfig cfg;
    cfg.axis = axis;
    cfg.frozen = frozen;
    switch (axis) {
      case SweepAxis::observed_count: cfg.axis_values = {4.0, 6.0}; break;
      case SweepAxis::connection_p: cfg.axis_values = {0.3, 0.8}; break;
      default: cfg.axis_values = {1000.0, 2000.0}; break;
    }
    if (axis == SweepAxis::sample_count) cfg.frozen.analytic_moments = false;
    const AccuracyReport report = run_sweep(cfg);
    CHECK(report.rows.size() == 2);
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
      INFO(report.rows[i].error);
      CHECK(report.rows[i].error.empty());
      CHECK(report.rows[i].axis_value == cfg.axis_values[i]);
    }
  }
}

TEST_CASE("nig accuracy does not improve from beta 0 to beta 50") {
  // Desk-scale version of the degradation trend: empirical moments, small n.
  SweepConfig cfg;
  cfg.axis = SweepAxis::beta;
  cfg.axis_values = {0.0, 50.0};
  cfg.frozen.n_nodes = 15;
  cfg.frozen.observed_count = 12;
  cfg.frozen.connection_p = 0.6;
  cfg.frozen.rho = 0.8;
  cfg.frozen.sample_count = 20000;
  cfg.frozen.seeds_per_cell = 5;
  cfg.frozen.estimators = {"nig_gmm"};

  const AccuracyReport report = run_sweep(cfg);
  double at_zero = -1.0;
  double at_fifty = -1.0;
  for (const AccuracyAggregate& agg : report.aggregates) {
    if (agg.axis_value == 0.0) at_zero = agg.median;
    if (agg.axis_value == 50.0) at_fifty = agg.median;
  }
  REQUIRE(at_zero >= 0.0);
  REQUIRE(at_fifty >= 0.0);
  CHECK(at_fifty <= at_zero);
}

}  // TEST_SUITE
