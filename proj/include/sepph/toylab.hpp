#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sepph/geometry.hpp"
#include "sepph/synth.hpp"

namespace sepph {

struct ToyNetConfig {
  std::size_t input_dim = 40;
  std::size_t hidden1 = 20;
  std::size_t hidden2 = 5;
  bool use_layer_norm = false;
  std::uint64_t seed = 0;

  void validate() const;
};

inline constexpr double kLayerNormEps = 1e-5;

/// input -> fc1 -> ReLU -> fc2 -> ReLU -> [LayerNorm] -> fc3 -> softmax(2).
///
/// The same struct doubles as the gradient container, so parameters and
/// gradients always line up in `parameters()`.
struct ToyNet {
  ToyNetConfig config;
  Eigen::MatrixXd w1, w2, w3;  // out x in
  Eigen::VectorXd b1, b2, b3;
  Eigen::VectorXd ln_gain, ln_offset;  // empty without LayerNorm

  /// Weights and biases uniform in +-1/sqrt(fan_in), drawn from
  /// CounterRng(config.seed) in the order w1 (row-major), b1, w2, b2, w3, b3.
  /// LayerNorm gain starts at 1, offset at 0.
  static ToyNet init(const ToyNetConfig& cfg);
  /// Same shapes, all zeros.
  static ToyNet zeros_like(const ToyNet& net);

  /// Views in a fixed order: w1 b1 w2 b2 ln_gain ln_offset w3 b3.
  std::vector<std::span<double>> parameters();
  std::vector<std::span<const double>> parameters() const;

  /// Embedding of every row (post-ReLU fc2, LayerNorm applied when enabled).
  RowMatrix hidden(const RowMatrix& x) const;
  /// N x 2 class probabilities.
  RowMatrix forward(const RowMatrix& x) const;
};

/// (v - mean) / sqrt(var + eps) * gain + offset with population variance.
Eigen::VectorXd layer_norm(const Eigen::VectorXd& v, const Eigen::VectorXd& gain,
                           const Eigen::VectorXd& offset, double eps = kLayerNormEps);

/// Second-hidden-layer embedding of the cloud; labels carried through.
PointCloud encode(const ToyNet& net, const PointCloud& pc);

struct ToyGradient {
  double loss = 0.0;
  ToyNet grad;
};

/// Mean cross-entropy and its exact gradient by backpropagation.
ToyGradient toy_loss_gradient(const ToyNet& net, const RowMatrix& x, std::span<const int> labels);

struct AdamConfig {
  double lr = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Bias-corrected Adam over the parameters of one ToyNet.
class Adam {
 public:
  Adam(const ToyNet& net, AdamConfig cfg);
  void step(ToyNet& net, const ToyNet& grad);
  std::size_t steps() const noexcept { return t_; }

 private:
  AdamConfig cfg_;
  ToyNet m_, v_;
  std::size_t t_ = 0;
};

/// Per-epoch record of the tracking-set embedding. Index e holds the state
/// after e epochs; index 0 is the untrained network.
struct EmbeddingTrace {
  std::vector<int> epochs;
  std::vector<PointCloud> embeddings;
  std::vector<double> train_loss;
  std::vector<double> track_auc;
  ToyNet final_net;
};

/// Full-batch Adam on cross-entropy. Labels must be 0/1 in both sets.
EmbeddingTrace train_toy(const ToyNetConfig& cfg, const PointCloud& train, const PointCloud& track,
                         std::size_t epochs = 100, double lr = 1e-2);

// ---------------------------------------------------------------- experiment

/// Repeated toy runs: each dataset is trained once per requested variant.
struct ToyExperimentConfig {
  std::size_t datasets = 50;
  std::size_t epochs = 100;
  std::size_t samples = 2000;  // split in half: train, then tracking
  std::size_t features = 40;
  double class_sep = 0.5;
  /// 0 draws 1..3 clusters per class for every dataset.
  std::size_t clusters_per_class = 0;
  double lr = 1e-2;
  std::uint64_t seed = 0;
  bool run_plain = true;
  bool run_layer_norm = true;
};

struct ToyRunSummary {
  bool layer_norm = false;
  std::size_t dataset = 0;
  std::uint64_t data_seed = 0;
  std::uint64_t net_seed = 0;
  std::size_t clusters_per_class = 0;
  double final_loss = 0.0;
  double final_auc = 0.0;
  std::vector<double> initial_persistences;  // normalized, epoch 0
  std::vector<double> final_persistences;    // normalized, last epoch
};

/// Dataset recipe of run `dataset`. Both variants share it and the
/// network seed, so they differ only by the LayerNorm.
SynthConfig toy_dataset_config(const ToyExperimentConfig& cfg, std::size_t dataset);
std::uint64_t toy_network_seed(const ToyExperimentConfig& cfg, std::size_t dataset);

/// Splits a dataset into (first half, second half).
std::pair<PointCloud, PointCloud> split_halves(const PointCloud& pc);

using ToyRunSink = std::function<void(const ToyRunSummary&, const EmbeddingTrace&)>;

/// Runs all (dataset, variant) jobs concurrently. `sink`, if set, is called
/// from worker threads, once per job, while its trace is alive. Summaries are
/// returned ordered by dataset, plain before LayerNorm.
std::vector<ToyRunSummary> run_toy_experiment(const ToyExperimentConfig& cfg, const ToyRunSink& sink = {});

}  // namespace sepph
