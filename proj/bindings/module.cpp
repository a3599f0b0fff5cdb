#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "lagnet/classifiers.hpp"
#include "lagnet/estimators.hpp"
#include "lagnet/experiments.hpp"
#include "lagnet/features.hpp"
#include "lagnet/graph.hpp"
#include "lagnet/io.hpp"
#include "lagnet/lag_moments.hpp"
#include "lagnet/noise.hpp"
#include "lagnet/simulate.hpp"

namespace py = pybind11;
using namespace lagnet;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Network inference for linear dynamical systems under colored noise";
  m.attr("__version__") = kVersion;

  py::class_<Graph>(m, "Graph")
      .def(py::init<>())
      .def_readwrite("node_count", &Graph::node_count)
      .def_readwrite("adjacency", &Graph::adjacency)
      .def("degree", &Graph::degree, py::arg("node"))
      .def("max_degree", &Graph::max_degree)
      .def("edge_count", &Graph::edge_count)
      .def("is_connected", &Graph::is_connected)
      .def("__repr__", [](const Graph& g) {
        std::ostringstream out;
        out << "Graph(nodes=" << g.node_count << ", edges=" << g.edge_count() << ")";
        return out.str();
      });

  py::class_<InteractionMatrix>(m, "InteractionMatrix")
      .def_readonly("entries", &InteractionMatrix::entries)
      .def_readonly("rho", &InteractionMatrix::rho)
      .def_readonly("a_plus_min", &InteractionMatrix::a_plus_min)
      .def_readonly("support", &InteractionMatrix::support)
      .def("dimension", &InteractionMatrix::dimension)
      .def_static("zero", &InteractionMatrix::zero, py::arg("n_nodes"));

  py::class_<NoiseModel>(m, "NoiseModel")
      .def_readonly("covariance", &NoiseModel::covariance)
      .def_readonly("sigma_sq", &NoiseModel::sigma_sq)
      .def_readonly("sigma_gap_sq", &NoiseModel::sigma_gap_sq)
      .def_readonly("beta", &NoiseModel::beta)
      .def_readonly("sigma_bar", &NoiseModel::sigma_bar)
      .def_readonly("xi_variance", &NoiseModel::xi_variance)
      .def("dimension", &NoiseModel::dimension)
      .def("effective_gap", &NoiseModel::effective_gap)
      .def("with_exogenous", &NoiseModel::with_exogenous, py::arg("xi_variance"));

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("burn_in", &SimConfig::burn_in)
      .def_readwrite("extra_tail", &SimConfig::extra_tail)
      .def_readwrite("seed", &SimConfig::seed);

  py::class_<TimeSeries>(m, "TimeSeries")
      .def_readonly("samples", &TimeSeries::samples)
      .def_readonly("observed", &TimeSeries::observed)
      .def("sample_count", &TimeSeries::sample_count);

  py::class_<LagMoments>(m, "LagMoments")
      .def_readonly("min_lag", &LagMoments::min_lag)
      .def_readonly("max_lag", &LagMoments::max_lag)
      .def_readonly("observed", &LagMoments::observed)
      .def_readonly("sample_count", &LagMoments::sample_count)
      .def("at", &LagMoments::at, py::arg("lag"), py::return_value_policy::copy)
      .def("covers", &LagMoments::covers, py::arg("lag"))
      .def("dimension", &LagMoments::dimension)
      .def("restricted", &LagMoments::restricted, py::arg("s"));

  py::enum_<EstimatorKind>(m, "EstimatorKind")
      .value("one_lag", EstimatorKind::one_lag)
      .value("nig", EstimatorKind::nig)
      .value("precision", EstimatorKind::precision)
      .value("granger", EstimatorKind::granger);

  py::class_<MatrixEstimate>(m, "MatrixEstimate")
      .def_readonly("values", &MatrixEstimate::values)
      .def_readonly("kind", &MatrixEstimate::kind)
      .def_readonly("sample_count", &MatrixEstimate::sample_count)
      .def_readonly("observed", &MatrixEstimate::observed);

  py::class_<FeasibilityReport>(m, "FeasibilityReport")
      .def_readonly("error_matrix", &FeasibilityReport::error_matrix)
      .def_readonly("osc_error", &FeasibilityReport::osc_error)
      .def_readonly("lhs", &FeasibilityReport::lhs)
      .def_readonly("rhs", &FeasibilityReport::rhs)
      .def_readonly("feasible", &FeasibilityReport::feasible)
      .def_readonly("consistency_bound", &FeasibilityReport::consistency_bound);

  py::enum_<FeatureKind>(m, "FeatureKind")
      .value("f", FeatureKind::f)
      .value("t", FeatureKind::t)
      .value("k", FeatureKind::k);

  py::class_<Scaler>(m, "Scaler")
      .def_readonly("mean", &Scaler::mean)
      .def_readonly("scale", &Scaler::scale)
      .def("apply", &Scaler::apply, py::arg("rows"));

  py::class_<FeatureSet>(m, "FeatureSet")
      .def_readonly("kind", &FeatureSet::kind)
      .def_readonly("min_lag", &FeatureSet::min_lag)
      .def_readonly("max_lag", &FeatureSet::max_lag)
      .def_readonly("pairs", &FeatureSet::pairs)
      .def_readonly("features", &FeatureSet::features)
      .def_readwrite("labels", &FeatureSet::labels)
      .def_readonly("scaler", &FeatureSet::scaler)
      .def("pair_count", &FeatureSet::pair_count)
      .def("feature_dim", &FeatureSet::feature_dim);

  py::class_<Gmm1d>(m, "Gmm1d")
      .def_readonly("weights", &Gmm1d::weights)
      .def_readonly("means", &Gmm1d::means)
      .def_readonly("variances", &Gmm1d::variances)
      .def_readonly("iterations_run", &Gmm1d::iterations_run)
      .def_readonly("final_log_likelihood", &Gmm1d::final_log_likelihood)
      .def_readonly("log_likelihood_trace", &Gmm1d::log_likelihood_trace)
      .def("posterior_high", &Gmm1d::posterior_high, py::arg("value"));

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("hidden_sizes", &TrainConfig::hidden_sizes)
      .def_readwrite("learning_rate", &TrainConfig::learning_rate)
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("batch_size", &TrainConfig::batch_size)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_readwrite("class_weighting", &TrainConfig::class_weighting);

  py::class_<MlpModel>(m, "MlpModel")
      .def_readonly("layer_sizes", &MlpModel::layer_sizes)
      .def_readonly("weights", &MlpModel::weights)
      .def_readonly("biases", &MlpModel::biases)
      .def_readonly("scaler", &MlpModel::scaler)
      .def_readonly("config", &MlpModel::config)
      .def_readonly("loss_trace", &MlpModel::loss_trace);

  py::class_<PredictionSet>(m, "PredictionSet")
      .def_readonly("probabilities", &PredictionSet::probabilities)
      .def_readonly("decisions", &PredictionSet::decisions);

  py::enum_<SweepAxis>(m, "SweepAxis")
      .value("observed_count", SweepAxis::observed_count)
      .value("connection_p", SweepAxis::connection_p)
      .value("beta", SweepAxis::beta)
      .value("sample_count", SweepAxis::sample_count);

  py::class_<FrozenParams>(m, "FrozenParams")
      .def(py::init<>())
      .def_readwrite("n_nodes", &FrozenParams::n_nodes)
      .def_readwrite("connection_p", &FrozenParams::connection_p)
      .def_readwrite("rho", &FrozenParams::rho)
      .def_readwrite("observed_count", &FrozenParams::observed_count)
      .def_readwrite("beta", &FrozenParams::beta)
      .def_readwrite("jitter", &FrozenParams::jitter)
      .def_readwrite("sigma_gap_sq", &FrozenParams::sigma_gap_sq)
      .def_readwrite("sample_count", &FrozenParams::sample_count)
      .def_readwrite("seeds_per_cell", &FrozenParams::seeds_per_cell)
      .def_readwrite("estimators", &FrozenParams::estimators)
      .def_readwrite("min_lag", &FrozenParams::min_lag)
      .def_readwrite("max_lag", &FrozenParams::max_lag)
      .def_readwrite("burn_in", &FrozenParams::burn_in)
      .def_readwrite("master_seed", &FrozenParams::master_seed)
      .def_readwrite("analytic_moments", &FrozenParams::analytic_moments)
      .def_readwrite("threads", &FrozenParams::threads);

  py::class_<SweepConfig>(m, "SweepConfig")
      .def(py::init<>())
      .def_readwrite("axis", &SweepConfig::axis)
      .def_readwrite("axis_values", &SweepConfig::axis_values)
      .def_readwrite("frozen", &SweepConfig::frozen)
      .def_readwrite("output_path", &SweepConfig::output_path);

  py::class_<AccuracyRow>(m, "AccuracyRow")
      .def_readonly("axis_value", &AccuracyRow::axis_value)
      .def_readonly("estimator", &AccuracyRow::estimator)
      .def_readonly("seed_index", &AccuracyRow::seed_index)
      .def_readonly("derived_seed", &AccuracyRow::derived_seed)
      .def_readonly("accuracy", &AccuracyRow::accuracy)
      .def_readonly("error", &AccuracyRow::error);

  py::class_<AccuracyAggregate>(m, "AccuracyAggregate")
      .def_readonly("axis_value", &AccuracyAggregate::axis_value)
      .def_readonly("estimator", &AccuracyAggregate::estimator)
      .def_readonly("median", &AccuracyAggregate::median)
      .def_readonly("iqr_low", &AccuracyAggregate::iqr_low)
      .def_readonly("iqr_high", &AccuracyAggregate::iqr_high)
      .def_readonly("cells_ok", &AccuracyAggregate::cells_ok);

  py::class_<AccuracyReport>(m, "AccuracyReport")
      .def_readonly("rows", &AccuracyReport::rows)
      .def_readonly("aggregates", &AccuracyReport::aggregates);

  py::class_<CorpusConfig>(m, "CorpusConfig")
      .def(py::init<>())
      .def_readwrite("n_nodes", &CorpusConfig::n_nodes)
      .def_readwrite("connection_p", &CorpusConfig::connection_p)
      .def_readwrite("rho", &CorpusConfig::rho)
      .def_readwrite("sigma_gap_sq", &CorpusConfig::sigma_gap_sq)
      .def_readwrite("betas", &CorpusConfig::betas)
      .def_readwrite("sample_count", &CorpusConfig::sample_count)
      .def_readwrite("min_lag", &CorpusConfig::min_lag)
      .def_readwrite("max_lag", &CorpusConfig::max_lag)
      .def_readwrite("burn_in", &CorpusConfig::burn_in)
      .def_readwrite("kind", &CorpusConfig::kind);

  // Graphs and interaction matrices.
  m.def("erdos_renyi", &erdos_renyi, py::arg("n_nodes"), py::arg("p"), py::arg("seed"));
  m.def("watts_strogatz", &watts_strogatz, py::arg("n_nodes"), py::arg("ring_degree"),
        py::arg("rewire_p"), py::arg("seed"));
  m.def("parse_edge_list", &parse_edge_list, py::arg("text"));
  m.def("load_edge_list", [](const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return load_edge_list(in);
  }, py::arg("path"));
  m.def("laplacian_weights", &laplacian_weights, py::arg("graph"), py::arg("rho"));

  // Noise models.
  m.def("decompose_covariance", &decompose_covariance, py::arg("cov"));
  m.def("offset_noise", &offset_noise, py::arg("n_nodes"), py::arg("sigma_gap_sq"),
        py::arg("beta"));
  m.def("jittered_noise", &jittered_noise, py::arg("n_nodes"), py::arg("sigma_gap_sq"),
        py::arg("beta"), py::arg("jitter"), py::arg("seed"));
  m.def("sample_noise", &sample_noise, py::arg("model"), py::arg("count"), py::arg("seed"));

  // Simulation.
  m.def("simulate", &simulate, py::arg("a"), py::arg("noise"), py::arg("n"),
        py::arg("cfg") = SimConfig{});
  m.def("restrict_series", &restrict_series, py::arg("ts"), py::arg("s"));

  // Lag moments.
  m.def("empirical_lag_moments", &empirical_lag_moments, py::arg("ts"), py::arg("min_lag"),
        py::arg("max_lag"));
  m.def("stationary_covariance", &stationary_covariance, py::arg("a"), py::arg("noise"));
  m.def("analytic_lag_moment", &analytic_lag_moment, py::arg("a"), py::arg("r0"),
        py::arg("lag"));
  m.def("analytic_lag_moments", &analytic_lag_moments, py::arg("a"), py::arg("noise"),
        py::arg("min_lag"), py::arg("max_lag"));

  // Estimators and feasibility.
  m.def("osc", [](const std::vector<double>& values) { return osc(values); },
        py::arg("values"));
  m.def("off_diagonal_values", &off_diagonal_values, py::arg("matrix"));
  m.def("estimate", &estimate, py::arg("moments"), py::arg("kind"));
  m.def("error_matrix", &error_matrix, py::arg("a"), py::arg("noise"), py::arg("s"));
  m.def("feasibility_margin", &feasibility_margin, py::arg("a"), py::arg("noise"),
        py::arg("s"));
  m.def("min_exogenous_variance", &min_exogenous_variance, py::arg("a"), py::arg("noise"));
  m.def("threshold_support", &threshold_support, py::arg("estimate"), py::arg("threshold"));
  m.def("largest_gap_threshold",
        [](const std::vector<double>& values) { return largest_gap_threshold(values); },
        py::arg("values"));

  // Features.
  m.def("ordered_pairs", &ordered_pairs, py::arg("observed"));
  m.def("build_f", &build_f, py::arg("moments"));
  m.def("build_t", &build_t, py::arg("moments"));
  m.def("build_k", &build_k, py::arg("f"), py::arg("t"));
  m.def("fit_scaler", &fit_scaler, py::arg("features"));
  m.def("apply_scaler", &apply_scaler, py::arg("features"), py::arg("scaler"));

  // Classifiers.
  m.def("fit_gmm",
        [](const std::vector<double>& values, int max_iters, double tol) {
          return fit_gmm(values, max_iters, tol);
        },
        py::arg("values"), py::arg("max_iters") = 500, py::arg("tol") = 1e-9);
  m.def("gmm_classify", &gmm_classify, py::arg("model"), py::arg("estimate"));
  m.def("train_ffnn", &train_ffnn, py::arg("train"), py::arg("cfg"));
  m.def("ffnn_predict", &ffnn_predict, py::arg("model"), py::arg("features"));
  m.def("extract_labels", &extract_labels, py::arg("a"), py::arg("s"));
  m.def("pair_decision_matrix", &pair_decision_matrix, py::arg("pairs"),
        py::arg("decisions"), py::arg("s"));
  m.def("support_matrix", &support_matrix, py::arg("a"), py::arg("s"));
  m.def("save_mlp", &save_mlp, py::arg("model"), py::arg("path"));
  m.def("load_mlp", &load_mlp, py::arg("path"));

  // Experiments.
  m.def("accuracy", &accuracy, py::arg("predicted"), py::arg("truth"));
  m.def("build_training_corpus", &build_training_corpus, py::arg("seed"),
        py::arg("cfg") = CorpusConfig{});
  m.def("evaluate_cell",
        [](const FrozenParams& frozen, SweepAxis axis, double axis_value,
           const std::string& estimator, int seed_index, std::uint64_t derived_seed,
           const MlpModel* ffnn_k, const MlpModel* ffnn_f) {
          ModelSet models;
          models.ffnn_k = ffnn_k;
          models.ffnn_f = ffnn_f;
          return evaluate_cell(frozen, axis, axis_value, estimator, seed_index, derived_seed,
                               models);
        },
        py::arg("frozen"), py::arg("axis"), py::arg("axis_value"), py::arg("estimator"),
        py::arg("seed_index"), py::arg("derived_seed"), py::arg("ffnn_k") = nullptr,
        py::arg("ffnn_f") = nullptr);
  m.def("run_sweep",
        [](const SweepConfig& cfg, const MlpModel* ffnn_k, const MlpModel* ffnn_f) {
          ModelSet models;
          models.ffnn_k = ffnn_k;
          models.ffnn_f = ffnn_f;
          return run_sweep(cfg, models);
        },
        py::arg("cfg"), py::arg("ffnn_k") = nullptr, py::arg("ffnn_f") = nullptr,
        py::call_guard<py::gil_scoped_release>());
}
