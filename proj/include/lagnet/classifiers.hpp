#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lagnet/estimators.hpp"
#include "lagnet/features.hpp"
#include "lagnet/graph.hpp"

namespace lagnet {

/// Two-component 1-D Gaussian mixture fitted by EM.
struct Gmm1d {
  std::array<double, 2> weights{0.5, 0.5};
  std::array<double, 2> means{0.0, 0.0};
  std::array<double, 2> variances{1.0, 1.0};
  int iterations_run = 0;
  double final_log_likelihood = 0.0;
  std::vector<double> log_likelihood_trace;

  /// Posterior probability of the larger-mean component at a value.
  double posterior_high(double value) const;
};

/// EM from percentile initialization (means at the 10th/90th percentiles,
/// equal weights, variances = overall variance). Stops when the
/// log-likelihood change drops below tol. Variances are floored at 1e-12.
/// Needs >= 4 values, not all equal.
Gmm1d fit_gmm(std::span<const double> values, int max_iters = 500, double tol = 1e-9);

/// Pair (i, j) connected iff the posterior of the larger-mean component
/// exceeds 1/2 at the symmetrized estimate value (A is nonnegative, so the
/// connected cluster sits higher).
BoolMatrix gmm_classify(const Gmm1d& model, const MatrixEstimate& est);

struct TrainConfig {
  std::vector<int> hidden_sizes{32, 32};
  double learning_rate = 1e-3;
  int epochs = 50;
  int batch_size = 256;
  std::uint64_t seed = 0;
  bool class_weighting = true;
};

/// Feedforward network: rectifier hidden layers, logistic output unit.
/// weights[l] has shape layer_sizes[l+1] x layer_sizes[l].
struct MlpModel {
  std::vector<int> layer_sizes;
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  std::optional<Scaler> scaler;  // the feature scaler the model was trained with
  TrainConfig config;
  std::vector<double> loss_trace;  // mean batch loss per epoch
};

struct MlpGradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  double loss = 0.0;
};

/// Seeded He-normal initialization; biases start at zero.
MlpModel init_mlp(int input_dim, const TrainConfig& cfg);

/// Forward pass on raw (already scaled) rows; returns probabilities.
Eigen::VectorXd mlp_forward(const MlpModel& model, const Eigen::MatrixXd& rows);

/// Class-weighted binary cross-entropy (mean over rows) and its gradients.
MlpGradients mlp_loss_and_gradients(const MlpModel& model, const Eigen::MatrixXd& rows,
                                    std::span<const std::uint8_t> labels, double weight_pos,
                                    double weight_neg);

/// Mini-batch gradient descent with a fixed rate and a seeded shuffling
/// schedule; deterministic per config. The features are expected scaled; the
/// set's scaler (if any) is stored in the model for prediction.
MlpModel train_ffnn(const FeatureSet& train, const TrainConfig& cfg);

struct PredictionSet {
  Eigen::VectorXd probabilities;
  std::vector<std::uint8_t> decisions;  // probability > 0.5
};

/// Applies the stored scaler (input features must be unscaled in that case),
/// then the forward pass.
PredictionSet ffnn_predict(const MlpModel& model, const FeatureSet& fs);

/// Ground-truth labels over ordered_pairs(s): A_ij != 0.
std::vector<std::uint8_t> extract_labels(const InteractionMatrix& a, const std::vector<int>& s);

/// Symmetric decision matrix over s: pair connected iff either directed
/// decision fires (OR rule).
BoolMatrix pair_decision_matrix(const std::vector<std::pair<int, int>>& pairs,
                                const std::vector<std::uint8_t>& decisions,
                                const std::vector<int>& s);

/// Adjacency of the true support restricted to s.
BoolMatrix support_matrix(const InteractionMatrix& a, const std::vector<int>& s);

/// Model file with magic "LAGNET-MLP-1": layer sizes, row-major
/// little-endian 8-byte weights, scaler parameters and the train config.
void save_mlp(const MlpModel& model, const std::string& path);
MlpModel load_mlp(const std::string& path);

}  // namespace lagnet
