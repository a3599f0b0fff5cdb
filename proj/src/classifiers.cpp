#include "lagnet/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "lagnet/random.hpp"

namespace lagnet {

namespace {

constexpr double kVarianceFloor = 1e-12;
constexpr char kMlpMagic[] = "LAGNET-MLP-1\n";

double percentile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

double log_normal_pdf(double x, double mean, double variance) {
  const double d = x - mean;
  return -0.5 * std::log(2.0 * std::numbers::pi * variance) - d * d / (2.0 * variance);
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) {
  if (z > 30.0) return z;
  if (z < -30.0) return std::exp(z);
  return std::log1p(std::exp(z));
}

}  // namespace

double Gmm1d::posterior_high(double value) const {
  const int hi = means[1] >= means[0] ? 1 : 0;
  const int lo = 1 - hi;
  const double log_hi = std::log(weights[hi]) + log_normal_pdf(value, means[hi], variances[hi]);
  const double log_lo = std::log(weights[lo]) + log_normal_pdf(value, means[lo], variances[lo]);
  const double m = std::max(log_hi, log_lo);
  const double denom = std::exp(log_hi - m) + std::exp(log_lo - m);
  return std::exp(log_hi - m) / denom;
}

Gmm1d fit_gmm(std::span<const double> values, int max_iters, double tol) {
  const std::size_t n = values.size();
  if (n < 4) throw std::invalid_argument("fit_gmm: need at least 4 values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back()) {
    throw std::invalid_argument("fit_gmm: degenerate all-equal input");
  }

  Gmm1d model;
  model.means = {percentile(sorted, 0.10), percentile(sorted, 0.90)};
  double mean_all = 0.0;
  for (double v : values) mean_all += v;
  mean_all /= static_cast<double>(n);
  double var_all = 0.0;
  for (double v : values) var_all += (v - mean_all) * (v - mean_all);
  var_all = std::max(var_all / static_cast<double>(n), kVarianceFloor);
  model.variances = {var_all, var_all};
  model.weights = {0.5, 0.5};

  std::vector<double> resp(n);  // responsibility of component 1
  double prev_ll = -std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < max_iters; ++iter) {
    // E-step with the usual log-sum-exp guard.
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double l0 =
          std::log(model.weights[0]) + log_normal_pdf(values[i], model.means[0], model.variances[0]);
      const double l1 =
          std::log(model.weights[1]) + log_normal_pdf(values[i], model.means[1], model.variances[1]);
      const double m = std::max(l0, l1);
      const double denom = std::exp(l0 - m) + std::exp(l1 - m);
      resp[i] = std::exp(l1 - m) / denom;
      ll += m + std::log(denom);
    }
    model.log_likelihood_trace.push_back(ll);
    model.iterations_run = iter + 1;
    model.final_log_likelihood = ll;
    if (std::abs(ll - prev_ll) < tol) break;
    prev_ll = ll;

    // M-step.
    double n1 = 0.0;
    for (double r : resp) n1 += r;
    const double n0 = static_cast<double>(n) - n1;
    double w1 = n1 / static_cast<double>(n);
    w1 = std::clamp(w1, 1e-12, 1.0 - 1e-12);
    model.weights = {1.0 - w1, w1};
    if (n0 > 0.0 && n1 > 0.0) {
      double m0 = 0.0;
      double m1 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        m0 += (1.0 - resp[i]) * values[i];
        m1 += resp[i] * values[i];
      }
      m0 /= n0;
      m1 /= n1;
      double v0 = 0.0;
      double v1 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        v0 += (1.0 - resp[i]) * (values[i] - m0) * (values[i] - m0);
        v1 += resp[i] * (values[i] - m1) * (values[i] - m1);
      }
      model.means = {m0, m1};
      model.variances = {std::max(v0 / n0, kVarianceFloor), std::max(v1 / n1, kVarianceFloor)};
    }
  }
  return model;
}

BoolMatrix gmm_classify(const Gmm1d& model, const MatrixEstimate& est) {
  const int n = static_cast<int>(est.values.rows());
  BoolMatrix out = BoolMatrix::Constant(n, n, false);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double v = (est.values(i, j) + est.values(j, i)) / 2.0;
      if (model.posterior_high(v) > 0.5) {
        out(i, j) = true;
        out(j, i) = true;
      }
    }
  }
  return out;
}

MlpModel init_mlp(int input_dim, const TrainConfig& cfg) {
  if (input_dim < 1) throw std::invalid_argument("init_mlp: input_dim must be positive");
  if (cfg.learning_rate <= 0.0 || cfg.epochs < 1 || cfg.batch_size < 1) {
    throw std::invalid_argument("init_mlp: config fields must be positive");
  }
  for (int h : cfg.hidden_sizes) {
    if (h < 1) throw std::invalid_argument("init_mlp: hidden sizes must be positive");
  }
  MlpModel model;
  model.config = cfg;
  model.layer_sizes.push_back(input_dim);
  for (int h : cfg.hidden_sizes) model.layer_sizes.push_back(h);
  model.layer_sizes.push_back(1);
  for (std::size_t l = 0; l + 1 < model.layer_sizes.size(); ++l) {
    const int fan_in = model.layer_sizes[l];
    const int fan_out = model.layer_sizes[l + 1];
    Rng rng(derive_seed(cfg.seed, {0x57, static_cast<std::uint64_t>(l)}));
    const double std_dev = std::sqrt(2.0 / static_cast<double>(fan_in));
    Eigen::MatrixXd w(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) w(r, c) = std_dev * rng.gaussian();
    }
    model.weights.push_back(std::move(w));
    model.biases.push_back(Eigen::VectorXd::Zero(fan_out));
  }
  return model;
}

namespace {

struct ForwardPass {
  std::vector<Eigen::MatrixXd> activations;  // activations[0] = input rows
  std::vector<Eigen::MatrixXd> pre;          // pre-activations per layer
};

ForwardPass forward(const MlpModel& model, const Eigen::MatrixXd& rows) {
  if (rows.cols() != model.layer_sizes.front()) {
    throw std::invalid_argument("mlp: feature dimension mismatch");
  }
  ForwardPass fp;
  fp.activations.push_back(rows);
  const std::size_t layers = model.weights.size();
  for (std::size_t l = 0; l < layers; ++l) {
    Eigen::MatrixXd z =
        (fp.activations.back() * model.weights[l].transpose()).rowwise() +
        model.biases[l].transpose();
    if (l + 1 < layers) {
      fp.activations.push_back(z.cwiseMax(0.0));  // rectifier
    } else {
      fp.activations.push_back(z);  // logistic applied by the caller
    }
    fp.pre.push_back(std::move(z));
  }
  return fp;
}

}  // namespace

Eigen::VectorXd mlp_forward(const MlpModel& model, const Eigen::MatrixXd& rows) {
  const ForwardPass fp = forward(model, rows);
  Eigen::VectorXd probs(rows.rows());
  for (long r = 0; r < rows.rows(); ++r) probs(r) = sigmoid(fp.pre.back()(r, 0));
  return probs;
}

MlpGradients mlp_loss_and_gradients(const MlpModel& model, const Eigen::MatrixXd& rows,
                                    std::span<const std::uint8_t> labels, double weight_pos,
                                    double weight_neg) {
  const long batch = rows.rows();
  if (static_cast<long>(labels.size()) != batch) {
    throw std::invalid_argument("mlp: label count mismatch");
  }
  const ForwardPass fp = forward(model, rows);
  const std::size_t layers = model.weights.size();

  MlpGradients grads;
  grads.weights.resize(layers);
  grads.biases.resize(layers);

  // Weighted binary cross-entropy in the logit form: w * (softplus(z) - y z).
  Eigen::MatrixXd delta(batch, 1);
  double loss = 0.0;
  for (long r = 0; r < batch; ++r) {
    const double z = fp.pre.back()(r, 0);
    const double y = labels[static_cast<std::size_t>(r)] ? 1.0 : 0.0;
    const double w = labels[static_cast<std::size_t>(r)] ? weight_pos : weight_neg;
    loss += w * (softplus(z) - y * z);
    delta(r, 0) = w * (sigmoid(z) - y) / static_cast<double>(batch);
  }
  grads.loss = loss / static_cast<double>(batch);

  for (std::size_t l = layers; l-- > 0;) {
    grads.weights[l] = delta.transpose() * fp.activations[l];
    grads.biases[l] = delta.colwise().sum().transpose();
    if (l > 0) {
      Eigen::MatrixXd back = delta * model.weights[l];
      delta = ((fp.pre[l - 1].array() > 0.0).cast<double>() * back.array()).matrix();
    }
  }
  return grads;
}

MlpModel train_ffnn(const FeatureSet& train, const TrainConfig& cfg) {
  const long n = train.pair_count();
  if (train.labels.size() != static_cast<std::size_t>(n) || n == 0) {
    throw std::invalid_argument("train_ffnn: labeled feature set required");
  }
  MlpModel model = init_mlp(train.feature_dim(), cfg);
  model.scaler = train.scaler;

  double weight_pos = 1.0;
  double weight_neg = 1.0;
  if (cfg.class_weighting) {
    long n_pos = 0;
    for (auto y : train.labels) n_pos += y ? 1 : 0;
    const long n_neg = n - n_pos;
    if (n_pos > 0) weight_pos = static_cast<double>(n) / (2.0 * static_cast<double>(n_pos));
    if (n_neg > 0) weight_neg = static_cast<double>(n) / (2.0 * static_cast<double>(n_neg));
  }

  Rng shuffle_rng(derive_seed(cfg.seed, {0x5f}));
  std::vector<std::uint8_t> batch_labels;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const std::vector<int> order = shuffle_rng.permutation(static_cast<int>(n));
    double epoch_loss = 0.0;
    for (long start = 0; start < n; start += cfg.batch_size) {
      const long size = std::min<long>(cfg.batch_size, n - start);
      Eigen::MatrixXd rows(size, train.feature_dim());
      batch_labels.resize(static_cast<std::size_t>(size));
      for (long r = 0; r < size; ++r) {
        const int src = order[static_cast<std::size_t>(start + r)];
        rows.row(r) = train.features.row(src);
        batch_labels[static_cast<std::size_t>(r)] = train.labels[static_cast<std::size_t>(src)];
      }
      const MlpGradients grads =
          mlp_loss_and_gradients(model, rows, batch_labels, weight_pos, weight_neg);
      for (std::size_t l = 0; l < model.weights.size(); ++l) {
        model.weights[l] -= cfg.learning_rate * grads.weights[l];
        model.biases[l] -= cfg.learning_rate * grads.biases[l];
      }
      epoch_loss += grads.loss * static_cast<double>(size);
    }
    model.loss_trace.push_back(epoch_loss / static_cast<double>(n));
  }
  return model;
}

PredictionSet ffnn_predict(const MlpModel& model, const FeatureSet& fs) {
  Eigen::MatrixXd rows = fs.features;
  if (model.scaler.has_value()) {
    rows = model.scaler->apply(rows);
  }
  PredictionSet out;
  out.probabilities = mlp_forward(model, rows);
  out.decisions.resize(static_cast<std::size_t>(out.probabilities.size()));
  for (long i = 0; i < out.probabilities.size(); ++i) {
    out.decisions[static_cast<std::size_t>(i)] = out.probabilities(i) > 0.5 ? 1 : 0;
  }
  return out;
}

std::vector<std::uint8_t> extract_labels(const InteractionMatrix& a, const std::vector<int>& s) {
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] < 0 || s[k] >= a.dimension()) {
      throw std::invalid_argument("extract_labels: node id out of range");
    }
    if (k > 0 && s[k] <= s[k - 1]) {
      throw std::invalid_argument("extract_labels: index set not strictly increasing");
    }
  }
  std::vector<std::uint8_t> labels;
  labels.reserve(s.size() * (s.size() - 1));
  for (int i : s) {
    for (int j : s) {
      if (i != j) labels.push_back(a.entries(i, j) != 0.0 ? 1 : 0);
    }
  }
  return labels;
}

BoolMatrix pair_decision_matrix(const std::vector<std::pair<int, int>>& pairs,
                                const std::vector<std::uint8_t>& decisions,
                                const std::vector<int>& s) {
  if (pairs.size() != decisions.size()) {
    throw std::invalid_argument("pair_decision_matrix: size mismatch");
  }
  const int n = static_cast<int>(s.size());
  BoolMatrix out = BoolMatrix::Constant(n, n, false);
  auto position = [&s](int node) {
    const auto it = std::lower_bound(s.begin(), s.end(), node);
    if (it == s.end() || *it != node) {
      throw std::invalid_argument("pair_decision_matrix: pair node outside the index set");
    }
    return static_cast<int>(it - s.begin());
  };
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if (!decisions[p]) continue;
    const int pi = position(pairs[p].first);
    const int pj = position(pairs[p].second);
    out(pi, pj) = true;  // OR of the two directed decisions
    out(pj, pi) = true;
  }
  return out;
}

BoolMatrix support_matrix(const InteractionMatrix& a, const std::vector<int>& s) {
  const int n = static_cast<int>(s.size());
  BoolMatrix out = BoolMatrix::Constant(n, n, false);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (r != c) out(r, c) = a.support.adjacency(s[static_cast<std::size_t>(r)],
                                                  s[static_cast<std::size_t>(c)]);
    }
  }
  return out;
}

namespace {

template <typename T>
void write_raw(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("mlp file: truncated");
  return value;
}

void write_doubles(std::ostream& out, const double* data, std::size_t count) {
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * 8));
}

void read_doubles(std::istream& in, double* data, std::size_t count) {
  in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * 8));
  if (!in) throw std::runtime_error("mlp file: truncated");
}

}  // namespace

void save_mlp(const MlpModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_mlp: cannot open " + path);
  out.write(kMlpMagic, sizeof(kMlpMagic) - 1);
  write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(model.layer_sizes.size()));
  for (int s : model.layer_sizes) write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(s));
  write_raw<std::uint8_t>(out, model.scaler.has_value() ? 1 : 0);
  if (model.scaler.has_value()) {
    write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(model.scaler->mean.size()));
    write_doubles(out, model.scaler->mean.data(), model.scaler->mean.size());
    write_doubles(out, model.scaler->scale.data(), model.scaler->scale.size());
  }
  write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(model.config.hidden_sizes.size()));
  for (int h : model.config.hidden_sizes) {
    write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(h));
  }
  write_raw<double>(out, model.config.learning_rate);
  write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(model.config.epochs));
  write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(model.config.batch_size));
  write_raw<std::uint64_t>(out, model.config.seed);
  write_raw<std::uint8_t>(out, model.config.class_weighting ? 1 : 0);
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    // Row-major on disk regardless of Eigen's storage order.
    const Eigen::MatrixXd& w = model.weights[l];
    for (long r = 0; r < w.rows(); ++r) {
      for (long c = 0; c < w.cols(); ++c) write_raw<double>(out, w(r, c));
    }
    write_doubles(out, model.biases[l].data(), model.biases[l].size());
  }
  if (!out) throw std::runtime_error("save_mlp: write failed");
}

MlpModel load_mlp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_mlp: cannot open " + path);
  char magic[sizeof(kMlpMagic) - 1];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMlpMagic, sizeof(magic)) != 0) {
    throw std::runtime_error("load_mlp: bad magic (expected LAGNET-MLP-1)");
  }
  MlpModel model;
  const auto n_layers = read_raw<std::uint32_t>(in);
  model.layer_sizes.resize(n_layers);
  for (auto& s : model.layer_sizes) s = static_cast<int>(read_raw<std::uint32_t>(in));
  if (read_raw<std::uint8_t>(in)) {
    Scaler scaler;
    const auto dim = read_raw<std::uint32_t>(in);
    scaler.mean.resize(dim);
    scaler.scale.resize(dim);
    read_doubles(in, scaler.mean.data(), dim);
    read_doubles(in, scaler.scale.data(), dim);
    model.scaler = std::move(scaler);
  }
  const auto n_hidden = read_raw<std::uint32_t>(in);
  model.config.hidden_sizes.resize(n_hidden);
  for (auto& h : model.config.hidden_sizes) h = static_cast<int>(read_raw<std::uint32_t>(in));
  model.config.learning_rate = read_raw<double>(in);
  model.config.epochs = static_cast<int>(read_raw<std::uint32_t>(in));
  model.config.batch_size = static_cast<int>(read_raw<std::uint32_t>(in));
  model.config.seed = read_raw<std::uint64_t>(in);
  model.config.class_weighting = read_raw<std::uint8_t>(in) != 0;
  for (std::size_t l = 0; l + 1 < model.layer_sizes.size(); ++l) {
    Eigen::MatrixXd w(model.layer_sizes[l + 1], model.layer_sizes[l]);
    for (long r = 0; r < w.rows(); ++r) {
      for (long c = 0; c < w.cols(); ++c) w(r, c) = read_raw<double>(in);
    }
    Eigen::VectorXd b(model.layer_sizes[l + 1]);
    read_doubles(in, b.data(), b.size());
    model.weights.push_back(std::move(w));
    model.biases.push_back(std::move(b));
  }
  return model;
}

}  // namespace lagnet
