#include "lagnet/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "lagnet/estimators.hpp"
#include "lagnet/io.hpp"
#include "lagnet/lag_moments.hpp"
#include "lagnet/noise.hpp"
#include "lagnet/random.hpp"
#include "lagnet/simulate.hpp"

namespace lagnet {

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::observed_count: return "observed_count";
    case SweepAxis::connection_p: return "connection_p";
    case SweepAxis::beta: return "beta";
    case SweepAxis::sample_count: return "sample_count";
  }
  throw std::invalid_argument("unknown sweep axis");
}

SweepAxis sweep_axis_from_string(const std::string& name) {
  if (name == "observed_count") return SweepAxis::observed_count;
  if (name == "connection_p") return SweepAxis::connection_p;
  if (name == "beta") return SweepAxis::beta;
  if (name == "sample_count") return SweepAxis::sample_count;
  throw std::invalid_argument("unknown sweep axis: " + name);
}

const MlpModel* ModelSet::for_estimator(const std::string& name) const {
  if (name == "ffnn_k") return ffnn_k;
  if (name == "ffnn_f_only") return ffnn_f;
  return nullptr;
}

double accuracy(const BoolMatrix& predicted, const BoolMatrix& truth) {
  const int n = static_cast<int>(predicted.rows());
  if (truth.rows() != n || predicted.cols() != n || truth.cols() != n) {
    throw std::invalid_argument("accuracy: pair sets differ");
  }
  if (n < 2) throw std::invalid_argument("accuracy: no pairs");
  long matches = 0;
  long total = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      ++total;
      if (predicted(i, j) == truth(i, j)) ++matches;
    }
  }
  return static_cast<double>(matches) / static_cast<double>(total);
}

FeatureSet build_training_corpus(std::uint64_t seed, const CorpusConfig& cfg) {
  if (cfg.betas.empty()) throw std::invalid_argument("corpus: empty beta grid");
  const Graph graph = erdos_renyi(cfg.n_nodes, cfg.connection_p, derive_seed(seed, {0}));
  const InteractionMatrix a = laplacian_weights(graph, cfg.rho);
  std::vector<int> all_nodes(static_cast<std::size_t>(cfg.n_nodes));
  for (int i = 0; i < cfg.n_nodes; ++i) all_nodes[static_cast<std::size_t>(i)] = i;
  const std::vector<std::uint8_t> labels = extract_labels(a, all_nodes);

  FeatureSet pool;
  bool first = true;
  const int reach = std::max(cfg.max_lag, cfg.min_lag < 0 ? -cfg.min_lag : 0);
  for (std::size_t b = 0; b < cfg.betas.size(); ++b) {
    const NoiseModel noise = offset_noise(cfg.n_nodes, cfg.sigma_gap_sq, cfg.betas[b]);
    SimConfig sim;
    sim.burn_in = cfg.burn_in;
    sim.extra_tail = reach;
    sim.seed = derive_seed(seed, {1, b});
    const TimeSeries ts = simulate(a, noise, cfg.sample_count, sim);
    const LagMoments moments = empirical_lag_moments(ts, cfg.min_lag, cfg.max_lag);

    FeatureSet fs;
    if (cfg.kind == FeatureKind::f) {
      fs = build_f(moments);
    } else if (cfg.kind == FeatureKind::t) {
      fs = build_t(moments);
    } else {
      fs = build_k(build_f(moments), build_t(moments));
    }
    fs.labels = labels;

    if (first) {
      pool = std::move(fs);
      first = false;
    } else {
      const long old_rows = pool.features.rows();
      pool.features.conservativeResize(old_rows + fs.features.rows(), Eigen::NoChange);
      pool.features.bottomRows(fs.features.rows()) = fs.features;
      pool.pairs.insert(pool.pairs.end(), fs.pairs.begin(), fs.pairs.end());
      pool.labels.insert(pool.labels.end(), fs.labels.begin(), fs.labels.end());
    }
  }
  return fit_scaler(pool);
}

namespace {

struct CellParams {
  int n_nodes;
  double connection_p;
  double rho;
  int observed_count;
  double beta;
  long sample_count;
};

CellParams apply_axis(const FrozenParams& frozen, SweepAxis axis, double value) {
  CellParams p{frozen.n_nodes, frozen.connection_p, frozen.rho, frozen.observed_count,
               frozen.beta, frozen.sample_count};
  switch (axis) {
    case SweepAxis::observed_count: p.observed_count = static_cast<int>(value); break;
    case SweepAxis::connection_p: p.connection_p = value; break;
    case SweepAxis::beta: p.beta = value; break;
    case SweepAxis::sample_count: p.sample_count = static_cast<long>(value); break;
  }
  return p;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

AccuracyRow evaluate_cell(const FrozenParams& frozen, SweepAxis axis, double axis_value,
                          const std::string& estimator, int seed_index,
                          std::uint64_t derived_seed, const ModelSet& models) {
  AccuracyRow row;
  row.axis_value = axis_value;
  row.estimator = estimator;
  row.seed_index = seed_index;
  row.derived_seed = derived_seed;
  try {
    const CellParams p = apply_axis(frozen, axis, axis_value);
    if (p.observed_count < 2 || p.observed_count > p.n_nodes) {
      throw std::invalid_argument("cell: observed_count outside [2, n_nodes]");
    }
    const Graph graph = erdos_renyi(p.n_nodes, p.connection_p, derive_seed(derived_seed, {1}));
    const InteractionMatrix a = laplacian_weights(graph, p.rho);
    const NoiseModel noise =
        frozen.jitter > 0.0
            ? jittered_noise(p.n_nodes, frozen.sigma_gap_sq, p.beta, frozen.jitter,
                             derive_seed(derived_seed, {2}))
            : offset_noise(p.n_nodes, frozen.sigma_gap_sq, p.beta);

    // Observed set: sorted prefix of a seeded permutation.
    Rng subset_rng(derive_seed(derived_seed, {3}));
    std::vector<int> perm = subset_rng.permutation(p.n_nodes);
    std::vector<int> s(perm.begin(), perm.begin() + p.observed_count);
    std::sort(s.begin(), s.end());

    const bool feature_based = estimator == "ffnn_k" || estimator == "ffnn_f_only";
    const int min_lag = feature_based ? frozen.min_lag : 0;
    const int max_lag = feature_based ? frozen.max_lag : 3;

    LagMoments moments;
    if (frozen.analytic_moments) {
      moments = analytic_lag_moments(a, noise, min_lag, max_lag).restricted(s);
    } else {
      SimConfig sim;
      sim.burn_in = frozen.burn_in;
      sim.extra_tail = std::max(max_lag, min_lag < 0 ? -min_lag : 0);
      sim.seed = derive_seed(derived_seed, {4});
      const TimeSeries ts = simulate(a, noise, p.sample_count, sim);
      moments = empirical_lag_moments(restrict_series(ts, s), min_lag, max_lag);
    }

    BoolMatrix predicted;
    if (feature_based) {
      const MlpModel* model = models.for_estimator(estimator);
      if (model == nullptr) {
        throw std::invalid_argument("cell: no trained network for " + estimator);
      }
      FeatureSet fs = estimator == "ffnn_k"
                          ? build_k(build_f(moments), build_t(moments))
                          : build_f(moments);
      const PredictionSet pred = ffnn_predict(*model, fs);
      predicted = pair_decision_matrix(fs.pairs, pred.decisions, s);
    } else {
      std::string base = estimator;
      const std::string suffix = "_gmm";
      if (base.size() > suffix.size() &&
          base.compare(base.size() - suffix.size(), suffix.size(), suffix) == 0) {
        base = base.substr(0, base.size() - suffix.size());
      }
      const EstimatorKind kind = estimator_kind_from_string(base);
      MatrixEstimate est = estimate(moments, kind);
      // The precision of a positively coupled system carries negative
      // off-diagonals on edges; flip the sign so the connected cluster is the
      // larger-mean component the classifier expects.
      if (kind == EstimatorKind::precision) est.values = -est.values;
      const Eigen::MatrixXd sym = (est.values + est.values.transpose()) / 2.0;
      const Gmm1d gmm = fit_gmm(off_diagonal_values(sym));
      predicted = gmm_classify(gmm, est);
    }
    row.accuracy = accuracy(predicted, support_matrix(a, s));
  } catch (const std::exception& e) {
    row.error = e.what();
    row.accuracy = std::numeric_limits<double>::quiet_NaN();
  }
  return row;
}

AccuracyReport run_sweep(const SweepConfig& cfg, const ModelSet& models) {
  if (cfg.axis_values.empty()) throw std::invalid_argument("sweep: no axis values");
  for (std::size_t i = 1; i < cfg.axis_values.size(); ++i) {
    if (cfg.axis_values[i] <= cfg.axis_values[i - 1]) {
      throw std::invalid_argument("sweep: axis values must be strictly increasing");
    }
  }
  if (cfg.frozen.seeds_per_cell < 1) throw std::invalid_argument("sweep: seeds_per_cell < 1");
  if (cfg.frozen.estimators.empty()) throw std::invalid_argument("sweep: no estimators");
  for (const std::string& est : cfg.frozen.estimators) {
    if ((est == "ffnn_k" || est == "ffnn_f_only") && models.for_estimator(est) == nullptr) {
      throw std::invalid_argument("sweep: estimator " + est + " needs a trained network");
    }
  }

  struct Cell {
    std::size_t axis_idx;
    std::size_t est_idx;
    int rep;
  };
  std::vector<Cell> cells;
  for (std::size_t ai = 0; ai < cfg.axis_values.size(); ++ai) {
    for (std::size_t ei = 0; ei < cfg.frozen.estimators.size(); ++ei) {
      for (int rep = 0; rep < cfg.frozen.seeds_per_cell; ++rep) {
        cells.push_back({ai, ei, rep});
      }
    }
  }

  AccuracyReport report;
  report.rows.resize(cells.size());
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = cfg.frozen.threads > 0
                               ? static_cast<unsigned>(cfg.frozen.threads)
                               : hw;
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= cells.size()) return;
      const Cell& cell = cells[c];
      const std::uint64_t seed = derive_seed(
          cfg.frozen.master_seed,
          {static_cast<std::uint64_t>(cell.axis_idx), static_cast<std::uint64_t>(cell.est_idx),
           static_cast<std::uint64_t>(cell.rep)});
      report.rows[c] =
          evaluate_cell(cfg.frozen, cfg.axis, cfg.axis_values[cell.axis_idx],
                        cfg.frozen.estimators[cell.est_idx], cell.rep, seed, models);
    }
  };
  if (workers <= 1 || cells.size() <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < std::min<std::size_t>(workers, cells.size()); ++w) {
      pool.emplace_back(work);
    }
    for (std::thread& t : pool) t.join();
  }

  std::sort(report.rows.begin(), report.rows.end(), [](const AccuracyRow& a, const AccuracyRow& b) {
    if (a.axis_value != b.axis_value) return a.axis_value < b.axis_value;
    if (a.estimator != b.estimator) return a.estimator < b.estimator;
    return a.seed_index < b.seed_index;
  });

  for (double axis_value : cfg.axis_values) {
    std::vector<std::string> names = cfg.frozen.estimators;
    std::sort(names.begin(), names.end());
    for (const std::string& name : names) {
      std::vector<double> ok;
      for (const AccuracyRow& row : report.rows) {
        if (row.axis_value == axis_value && row.estimator == name && row.error.empty()) {
          ok.push_back(row.accuracy);
        }
      }
      if (ok.empty()) continue;
      std::sort(ok.begin(), ok.end());
      AccuracyAggregate agg;
      agg.axis_value = axis_value;
      agg.estimator = name;
      agg.median = quantile_sorted(ok, 0.5);
      agg.iqr_low = quantile_sorted(ok, 0.25);
      agg.iqr_high = quantile_sorted(ok, 0.75);
      agg.cells_ok = static_cast<int>(ok.size());
      report.aggregates.push_back(agg);
    }
  }

  if (!cfg.output_path.empty()) {
    std::ofstream csv(cfg.output_path);
    if (!csv) throw std::runtime_error("sweep: cannot open " + cfg.output_path);
    write_report_csv(csv, report);
    std::string meta_path = cfg.output_path;
    const std::string ext = ".csv";
    if (meta_path.size() > ext.size() &&
        meta_path.compare(meta_path.size() - ext.size(), ext.size(), ext) == 0) {
      meta_path = meta_path.substr(0, meta_path.size() - ext.size());
    }
    meta_path += ".meta.json";
    std::ofstream meta(meta_path);
    if (!meta) throw std::runtime_error("sweep: cannot open " + meta_path);
    write_report_meta(meta, cfg, report);
  }
  return report;
}

}  // namespace lagnet
