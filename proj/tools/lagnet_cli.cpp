// Command line front end: graph generation, simulation, lag moments,
// estimators, feasibility analysis, feature export, network training and the
// sweep engine. Matrices and trajectories travel as CSV, sweep configs as
// JSON, trained networks as LAGNET-MLP-1 files.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "lagnet/classifiers.hpp"
#include "lagnet/estimators.hpp"
#include "lagnet/experiments.hpp"
#include "lagnet/features.hpp"
#include "lagnet/graph.hpp"
#include "lagnet/io.hpp"
#include "lagnet/lag_moments.hpp"
#include "lagnet/noise.hpp"
#include "lagnet/random.hpp"
#include "lagnet/simulate.hpp"

namespace {

using namespace lagnet;

std::vector<int> parse_index_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string field;
  while (std::getline(in, field, ',')) {
    if (!field.empty()) out.push_back(std::stoi(field));
  }
  return out;
}

struct GraphOptions {
  std::string model = "er";  // er | ws | file
  int nodes = 30;
  double p = 0.5;
  int ring_degree = 4;
  double rewire_p = 0.1;
  std::string edges_file;
  std::uint64_t seed = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--graph", model, "Graph source: er, ws or file")
        ->check(CLI::IsMember({"er", "ws", "file"}));
    cmd->add_option("--nodes", nodes, "Node count for generated graphs");
    cmd->add_option("--p", p, "Connection probability (er)");
    cmd->add_option("--ring-degree", ring_degree, "Ring degree (ws)");
    cmd->add_option("--rewire-p", rewire_p, "Rewiring probability (ws)");
    cmd->add_option("--edges-file", edges_file, "Edge list path (file)");
    cmd->add_option("--graph-seed", seed, "Graph generator seed");
  }

  Graph build() const {
    if (model == "er") return erdos_renyi(nodes, p, seed);
    if (model == "ws") return watts_strogatz(nodes, ring_degree, rewire_p, seed);
    std::ifstream in(edges_file);
    if (!in) throw std::runtime_error("cannot open edge list " + edges_file);
    return load_edge_list(in);
  }
};

struct NoiseOptions {
  double sigma_gap = 1.0;
  double beta = 0.0;
  double jitter = 0.0;
  double xi = 0.0;
  std::uint64_t seed = 7;

  void attach(CLI::App* cmd) {
    cmd->add_option("--sigma-gap", sigma_gap, "Variance gap of the noise covariance");
    cmd->add_option("--beta", beta, "Mean off-diagonal (offset) of the covariance");
    cmd->add_option("--jitter", jitter, "Max-abs off-diagonal perturbation");
    cmd->add_option("--xi", xi, "Exogenous excitation variance");
    cmd->add_option("--noise-seed", seed, "Seed for the jitter draw");
  }

  NoiseModel build(int n) const {
    NoiseModel noise = jitter > 0.0 ? jittered_noise(n, sigma_gap, beta, jitter, seed)
                                    : offset_noise(n, sigma_gap, beta);
    return xi > 0.0 ? noise.with_exogenous(xi) : noise;
  }
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output " + path);
  return out;
}

TimeSeries load_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trajectory " + path);
  return read_trajectory_csv(in);
}

SweepConfig sweep_config_from_json(const nlohmann::json& j) {
  SweepConfig cfg;
  cfg.axis = sweep_axis_from_string(j.at("axis").get<std::string>());
  cfg.axis_values = j.at("axis_values").get<std::vector<double>>();
  if (j.contains("output_path")) cfg.output_path = j["output_path"].get<std::string>();
  if (j.contains("frozen")) {
    const nlohmann::json& f = j["frozen"];
    FrozenParams& p = cfg.frozen;
    if (f.contains("n_nodes")) p.n_nodes = f["n_nodes"].get<int>();
    if (f.contains("connection_p")) p.connection_p = f["connection_p"].get<double>();
    if (f.contains("rho")) p.rho = f["rho"].get<double>();
    if (f.contains("observed_count")) p.observed_count = f["observed_count"].get<int>();
    if (f.contains("beta")) p.beta = f["beta"].get<double>();
    if (f.contains("jitter")) p.jitter = f["jitter"].get<double>();
    if (f.contains("sigma_gap_sq")) p.sigma_gap_sq = f["sigma_gap_sq"].get<double>();
    if (f.contains("sample_count")) p.sample_count = f["sample_count"].get<long>();
    if (f.contains("seeds_per_cell")) p.seeds_per_cell = f["seeds_per_cell"].get<int>();
    if (f.contains("estimators")) p.estimators = f["estimators"].get<std::vector<std::string>>();
    if (f.contains("min_lag")) p.min_lag = f["min_lag"].get<int>();
    if (f.contains("max_lag")) p.max_lag = f["max_lag"].get<int>();
    if (f.contains("burn_in")) p.burn_in = f["burn_in"].get<int>();
    if (f.contains("master_seed")) p.master_seed = f["master_seed"].get<std::uint64_t>();
    if (f.contains("analytic_moments")) p.analytic_moments = f["analytic_moments"].get<bool>();
    if (f.contains("threads")) p.threads = f["threads"].get<int>();
  }
  return cfg;
}

int run_gen_graph(const GraphOptions& graph_opts, const std::string& out_path) {
  const Graph g = graph_opts.build();
  if (!g.is_connected()) {
    std::cerr << "note: generated graph is disconnected\n";
  }
  std::cerr << "nodes=" << g.node_count << " edges=" << g.edge_count() << "\n";
  if (out_path.empty()) {
    write_edge_list(std::cout, g);
  } else {
    auto out = open_output(out_path);
    write_edge_list(out, g);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Network inference toolkit for linear dynamical systems under colored noise"};
  app.require_subcommand(1);

  // ---- gen-graph ----
  GraphOptions gen_graph_opts;
  std::string gen_graph_out;
  CLI::App* gen_graph = app.add_subcommand("gen-graph", "Generate or ingest a graph");
  gen_graph_opts.attach(gen_graph);
  gen_graph->add_option("--out", gen_graph_out, "Edge list output (stdout when omitted)");

  // ---- simulate ----
  GraphOptions sim_graph;
  NoiseOptions sim_noise;
  double sim_rho = 0.8;
  long sim_n = 10000;
  SimConfig sim_cfg;
  std::string sim_observe;
  std::string sim_out = "trajectory.csv";
  CLI::App* sim = app.add_subcommand("simulate", "Generate a trajectory of the system");
  sim_graph.attach(sim);
  sim_noise.attach(sim);
  sim->add_option("--rho", sim_rho, "Coupling strength (spectral radius)");
  sim->add_option("-n,--samples", sim_n, "Retained sample count");
  sim->add_option("--burn-in", sim_cfg.burn_in, "Discarded warm-up samples");
  sim->add_option("--extra-tail", sim_cfg.extra_tail, "Trailing samples for lag sums");
  sim->add_option("--seed", sim_cfg.seed, "Simulation seed");
  sim->add_option("--observe", sim_observe, "Comma-separated node subset to keep");
  sim->add_option("--out", sim_out, "Trajectory CSV path");

  // ---- moments ----
  std::string mom_input = "trajectory.csv";
  int mom_min_lag = 0;
  int mom_max_lag = 3;
  std::string mom_out_dir = "moments";
  CLI::App* mom = app.add_subcommand("moments", "Empirical lag covariance matrices");
  mom->add_option("--input", mom_input, "Trajectory CSV");
  mom->add_option("--min-lag", mom_min_lag, "Smallest lag (<= 1)");
  mom->add_option("--max-lag", mom_max_lag, "Largest lag");
  mom->add_option("--out-dir", mom_out_dir, "Directory for R_<k>.csv files");

  // ---- estimate ----
  std::string est_input = "trajectory.csv";
  std::string est_kind = "nig";
  std::string est_out;
  std::string est_support_out;
  double est_threshold = 0.0;
  bool est_threshold_set = false;
  bool est_threshold_auto = false;
  CLI::App* est = app.add_subcommand("estimate", "Matrix structure estimate from a trajectory");
  est->add_option("--input", est_input, "Trajectory CSV");
  est->add_option("--kind", est_kind, "one_lag, nig, precision or granger")
      ->check(CLI::IsMember({"one_lag", "nig", "precision", "granger"}));
  est->add_option("--out", est_out, "Estimate CSV (stdout when omitted)");
  est->add_option("--threshold", est_threshold, "Support threshold on symmetrized values")
      ->each([&est_threshold_set](const std::string&) { est_threshold_set = true; });
  est->add_flag("--threshold-auto", est_threshold_auto,
                "Pick the threshold at the widest gap of the off-diagonals");
  est->add_option("--support-out", est_support_out, "Thresholded support CSV");

  // ---- feasibility ----
  GraphOptions feas_graph;
  NoiseOptions feas_noise;
  double feas_rho = 0.8;
  std::string feas_subset;
  std::string feas_out;
  std::string feas_error_out;
  CLI::App* feas = app.add_subcommand("feasibility", "Error matrix and feasibility margin");
  feas_graph.attach(feas);
  feas_noise.attach(feas);
  feas->add_option("--rho", feas_rho, "Coupling strength");
  feas->add_option("--s", feas_subset, "Observed subset (default: all nodes)");
  feas->add_option("--out", feas_out, "Flat key=value output (stdout when omitted)");
  feas->add_option("--error-matrix-out", feas_error_out, "Error matrix CSV");

  // ---- features ----
  std::string feat_input = "trajectory.csv";
  int feat_min_lag = -50;
  int feat_max_lag = 50;
  std::string feat_kind = "k";
  bool feat_scale = false;
  std::string feat_label_edges;
  double feat_label_rho = 0.8;
  std::string feat_out = "features.csv";
  CLI::App* feat = app.add_subcommand("features", "Per-pair feature vectors from a trajectory");
  feat->add_option("--input", feat_input, "Trajectory CSV");
  feat->add_option("--min-lag", feat_min_lag, "Smallest lag");
  feat->add_option("--max-lag", feat_max_lag, "Largest lag");
  feat->add_option("--kind", feat_kind, "f, t or k")->check(CLI::IsMember({"f", "t", "k"}));
  feat->add_flag("--scale", feat_scale, "Fit and apply a standard scaler");
  feat->add_option("--label-edges", feat_label_edges,
                   "Edge list of the true graph; adds ground-truth labels");
  feat->add_option("--label-rho", feat_label_rho, "Coupling strength for the labels");
  feat->add_option("--out", feat_out, "Feature CSV path");

  // ---- train ----
  std::uint64_t train_corpus_seed = 1;
  long train_n = 100000;
  bool train_full_scale = false;
  double train_rho = 0.8;
  std::string train_kind = "k";
  std::string train_hidden = "32,32";
  TrainConfig train_cfg;
  std::string train_out = "model.bin";
  CLI::App* train = app.add_subcommand(
      "train", "Build the beta-grid training corpus and train the network");
  train->add_option("--corpus-seed", train_corpus_seed, "Corpus construction seed");
  train->add_option("-n,--samples", train_n, "Samples per dataset (desk scale)");
  train->add_flag("--full-scale", train_full_scale, "Use 5e5 samples per dataset");
  train->add_option("--rho", train_rho, "Coupling strength of the training system");
  train->add_option("--kind", train_kind, "Feature kind: k or f")
      ->check(CLI::IsMember({"k", "f"}));
  train->add_option("--hidden", train_hidden, "Hidden layer sizes, comma separated");
  train->add_option("--lr", train_cfg.learning_rate, "Learning rate");
  train->add_option("--epochs", train_cfg.epochs, "Training epochs");
  train->add_option("--batch", train_cfg.batch_size, "Mini-batch size");
  train->add_option("--train-seed", train_cfg.seed, "Training seed");
  bool train_no_weighting = false;
  train->add_flag("--no-class-weight", train_no_weighting, "Disable class weighting");
  train->add_option("--out", train_out, "Model file path");

  // ---- evaluate ----
  FrozenParams eval_frozen;
  std::string eval_axis = "beta";
  double eval_value = 0.0;
  std::string eval_estimator = "nig_gmm";
  int eval_seed_index = 0;
  std::string eval_model_path;
  CLI::App* eval = app.add_subcommand("evaluate", "Accuracy of one estimator cell");
  eval->add_option("--axis", eval_axis, "Axis the value overrides");
  eval->add_option("--value", eval_value, "Axis value");
  eval->add_option("--estimator", eval_estimator, "Estimator name");
  eval->add_option("--seed-index", eval_seed_index, "Replicate index");
  eval->add_option("--master-seed", eval_frozen.master_seed, "Master seed");
  eval->add_option("--n-nodes", eval_frozen.n_nodes, "System size");
  eval->add_option("--p", eval_frozen.connection_p, "Connection probability");
  eval->add_option("--rho", eval_frozen.rho, "Coupling strength");
  eval->add_option("--observed", eval_frozen.observed_count, "Observed node count");
  eval->add_option("--beta", eval_frozen.beta, "Noise offset");
  eval->add_option("--jitter", eval_frozen.jitter, "Noise jitter");
  eval->add_option("-n,--samples", eval_frozen.sample_count, "Sample count");
  eval->add_option("--min-lag", eval_frozen.min_lag, "Feature min lag");
  eval->add_option("--max-lag", eval_frozen.max_lag, "Feature max lag");
  eval->add_flag("--analytic", eval_frozen.analytic_moments, "Use analytic moments");
  eval->add_option("--model", eval_model_path, "Trained network for ffnn estimators");

  // ---- sweep ----
  std::string sweep_config_path;
  std::string sweep_out_override;
  std::string sweep_model_k;
  std::string sweep_model_f;
  CLI::App* sweep = app.add_subcommand("sweep", "Run every cell of a sweep config");
  sweep->add_option("--config", sweep_config_path, "Sweep config JSON")->required();
  sweep->add_option("--out", sweep_out_override, "Override the report path");
  sweep->add_option("--model-k", sweep_model_k, "Model file for ffnn_k");
  sweep->add_option("--model-f", sweep_model_f, "Model file for ffnn_f_only");

  // ---- plot ----
  std::string plot_input = "report.csv";
  std::string plot_out = "report.svg";
  std::string plot_axis_label = "axis";
  CLI::App* plot = app.add_subcommand("plot", "Render a report CSV as an SVG line plot");
  plot->add_option("--input", plot_input, "Report CSV");
  plot->add_option("--out", plot_out, "SVG path");
  plot->add_option("--axis-label", plot_axis_label, "X axis label");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_graph->parsed()) {
      return run_gen_graph(gen_graph_opts, gen_graph_out);
    }

    if (sim->parsed()) {
      const Graph g = sim_graph.build();
      const InteractionMatrix a = laplacian_weights(g, sim_rho);
      const NoiseModel noise = sim_noise.build(g.node_count);
      TimeSeries ts = simulate(a, noise, sim_n, sim_cfg);
      if (!sim_observe.empty()) ts = restrict_series(ts, parse_index_list(sim_observe));
      auto out = open_output(sim_out);
      write_trajectory_csv(out, ts);
      std::cerr << "wrote " << ts.sample_count() << " samples x " << ts.observed.size()
                << " nodes to " << sim_out << "\n";
      return 0;
    }

    if (mom->parsed()) {
      const TimeSeries ts = load_trajectory(mom_input);
      const LagMoments moments = empirical_lag_moments(ts, mom_min_lag, mom_max_lag);
      write_lag_moments(mom_out_dir, moments);
      std::cerr << "wrote lags " << mom_min_lag << ".." << mom_max_lag << " (n="
                << moments.sample_count << ") to " << mom_out_dir << "\n";
      return 0;
    }

    if (est->parsed()) {
      const TimeSeries ts = load_trajectory(est_input);
      const LagMoments moments = empirical_lag_moments(ts, 0, 3);
      const MatrixEstimate estimate_out = estimate(moments, estimator_kind_from_string(est_kind));
      if (est_out.empty()) {
        write_matrix_csv(std::cout, estimate_out.values);
      } else {
        auto out = open_output(est_out);
        write_matrix_csv(out, estimate_out.values);
      }
      if (est_threshold_set || est_threshold_auto) {
        double threshold = est_threshold;
        if (est_threshold_auto) {
          const Eigen::MatrixXd sym =
              (estimate_out.values + estimate_out.values.transpose()) / 2.0;
          threshold = largest_gap_threshold(off_diagonal_values(sym));
          std::cerr << "auto threshold: " << threshold << "\n";
        }
        const BoolMatrix support = threshold_support(estimate_out, threshold);
        Eigen::MatrixXd numeric = support.cast<double>();
        if (est_support_out.empty()) {
          write_matrix_csv(std::cout, numeric);
        } else {
          auto out = open_output(est_support_out);
          write_matrix_csv(out, numeric);
        }
      }
      return 0;
    }

    if (feas->parsed()) {
      const Graph g = feas_graph.build();
      const InteractionMatrix a = laplacian_weights(g, feas_rho);
      const NoiseModel noise = feas_noise.build(g.node_count);
      std::vector<int> subset = parse_index_list(feas_subset);
      if (subset.empty()) {
        subset.resize(static_cast<std::size_t>(g.node_count));
        for (int i = 0; i < g.node_count; ++i) subset[static_cast<std::size_t>(i)] = i;
      }
      const FeasibilityReport report = feasibility_margin(a, noise, subset);
      std::ostringstream record;
      write_feasibility_report(record, report);
      record << "min_exogenous_variance=" << min_exogenous_variance(a, noise) << "\n";
      if (feas_out.empty()) {
        std::cout << record.str();
      } else {
        auto out = open_output(feas_out);
        out << record.str();
      }
      if (!feas_error_out.empty()) {
        auto out = open_output(feas_error_out);
        write_matrix_csv(out, report.error_matrix);
      }
      return 0;
    }

    if (feat->parsed()) {
      const TimeSeries ts = load_trajectory(feat_input);
      const LagMoments moments = empirical_lag_moments(ts, feat_min_lag, feat_max_lag);
      FeatureSet fs;
      if (feat_kind == "f") {
        fs = build_f(moments);
      } else if (feat_kind == "t") {
        fs = build_t(moments);
      } else {
        fs = build_k(build_f(moments), build_t(moments));
      }
      if (!feat_label_edges.empty()) {
        std::ifstream in(feat_label_edges);
        if (!in) throw std::runtime_error("cannot open edge list " + feat_label_edges);
        const Graph truth = load_edge_list(in);
        const InteractionMatrix a = laplacian_weights(truth, feat_label_rho);
        fs.labels = extract_labels(a, ts.observed);
      }
      if (feat_scale) fs = fit_scaler(fs);
      auto out = open_output(feat_out);
      write_features_csv(out, fs);
      std::cerr << "wrote " << fs.pair_count() << " pairs x " << fs.feature_dim()
                << " dims to " << feat_out << "\n";
      return 0;
    }

    if (train->parsed()) {
      CorpusConfig corpus_cfg;
      corpus_cfg.sample_count = train_full_scale ? 500000 : train_n;
      corpus_cfg.rho = train_rho;
      corpus_cfg.kind = train_kind == "f" ? FeatureKind::f : FeatureKind::k;
      std::cerr << "building corpus: 11 datasets, n=" << corpus_cfg.sample_count << "\n";
      const FeatureSet corpus = build_training_corpus(train_corpus_seed, corpus_cfg);
      train_cfg.hidden_sizes.clear();
      for (int h : parse_index_list(train_hidden)) train_cfg.hidden_sizes.push_back(h);
      train_cfg.class_weighting = !train_no_weighting;
      std::cerr << "training on " << corpus.pair_count() << " pairs x "
                << corpus.feature_dim() << " dims\n";
      const MlpModel model = train_ffnn(corpus, train_cfg);
      save_mlp(model, train_out);

      MlpModel raw = model;
      raw.scaler.reset();  // corpus features are already scaled
      const PredictionSet pred = ffnn_predict(raw, corpus);
      long correct = 0;
      for (std::size_t i = 0; i < pred.decisions.size(); ++i) {
        if (pred.decisions[i] == corpus.labels[i]) ++correct;
      }
      std::cerr << "final loss " << model.loss_trace.back() << ", training accuracy "
                << static_cast<double>(correct) / static_cast<double>(corpus.pair_count())
                << ", model written to " << train_out << "\n";
      return 0;
    }

    if (eval->parsed()) {
      ModelSet models;
      MlpModel loaded;
      if (!eval_model_path.empty()) {
        loaded = load_mlp(eval_model_path);
        models.ffnn_k = &loaded;
        models.ffnn_f = &loaded;
      }
      const SweepAxis axis = sweep_axis_from_string(eval_axis);
      const std::uint64_t derived = derive_seed(
          eval_frozen.master_seed, {0, 0, static_cast<std::uint64_t>(eval_seed_index)});
      const AccuracyRow row = evaluate_cell(eval_frozen, axis, eval_value, eval_estimator,
                                            eval_seed_index, derived, models);
      if (!row.error.empty()) {
        std::cerr << "cell failed: " << row.error << "\n";
        return 1;
      }
      std::cout << "axis_value=" << row.axis_value << " estimator=" << row.estimator
                << " seed=" << row.seed_index << " accuracy=" << row.accuracy << "\n";
      return 0;
    }

    if (sweep->parsed()) {
      std::ifstream in(sweep_config_path);
      if (!in) throw std::runtime_error("cannot open config " + sweep_config_path);
      nlohmann::json j;
      in >> j;
      SweepConfig cfg = sweep_config_from_json(j);
      if (!sweep_out_override.empty()) cfg.output_path = sweep_out_override;
      if (cfg.output_path.empty()) cfg.output_path = "report.csv";

      ModelSet models;
      MlpModel model_k;
      MlpModel model_f;
      std::string path_k = sweep_model_k;
      std::string path_f = sweep_model_f;
      if (j.contains("models")) {
        if (path_k.empty() && j["models"].contains("ffnn_k")) {
          path_k = j["models"]["ffnn_k"].get<std::string>();
        }
        if (path_f.empty() && j["models"].contains("ffnn_f_only")) {
          path_f = j["models"]["ffnn_f_only"].get<std::string>();
        }
      }
      if (!path_k.empty()) {
        model_k = load_mlp(path_k);
        models.ffnn_k = &model_k;
      }
      if (!path_f.empty()) {
        model_f = load_mlp(path_f);
        models.ffnn_f = &model_f;
      }

      const AccuracyReport report = run_sweep(cfg, models);
      int failures = 0;
      for (const AccuracyRow& row : report.rows) {
        if (!row.error.empty()) ++failures;
      }
      for (const AccuracyAggregate& agg : report.aggregates) {
        std::cout << to_string(cfg.axis) << "=" << agg.axis_value << " " << agg.estimator
                  << ": median=" << agg.median << " iqr=[" << agg.iqr_low << ", "
                  << agg.iqr_high << "] cells=" << agg.cells_ok << "\n";
      }
      std::cerr << "report written to " << cfg.output_path << " (" << report.rows.size()
                << " cells, " << failures << " failed)\n";
      return failures == 0 ? 0 : 1;
    }

    if (plot->parsed()) {
      std::ifstream in(plot_input);
      if (!in) throw std::runtime_error("cannot open report " + plot_input);
      const AccuracyReport report = read_report_csv(in);
      auto out = open_output(plot_out);
      write_report_svg(out, report, plot_axis_label);
      std::cerr << "wrote " << plot_out << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
