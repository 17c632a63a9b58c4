#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sepph/geometry.hpp"

namespace sepph {

// ---------------------------------------------------------------- k-means

struct KMeansResult {
  std::vector<int> assignments;
  RowMatrix centroids;  // k x d
  double inertia = 0.0;
  std::size_t iterations = 0;
  /// Inertia after every assignment step; nonincreasing.
  std::vector<double> inertia_trace;
};

inline constexpr std::size_t kKMeansMaxIterations = 300;

/// Lloyd's algorithm from k-means++ seeding. Stops at an assignment fixpoint
/// or after kKMeansMaxIterations. An empty cluster is reseeded with the point
/// farthest from its own centroid.
KMeansResult kmeans(const PointCloud& pc, std::size_t k, std::uint64_t seed);

// ---------------------------------------------------------------- neighbors

/// The k nearest points to i, excluding i, ties to the lower index.
std::vector<std::size_t> knn_indices(const DistanceMatrix& dm, std::size_t i, std::size_t k);

// ---------------------------------------------------------------- softmax

/// Per-dimension affine map to mean 0 / std 1, fit on training data only.
/// Constant dimensions keep scale 1.
struct Standardizer {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;

  static Standardizer fit(const RowMatrix& x);
  RowMatrix apply(const RowMatrix& x) const;
};

struct SoftmaxModel {
  Eigen::MatrixXd weights;  // C x d
  Eigen::VectorXd bias;     // C
  int classes = 0;
  Standardizer standardizer;
  /// Mean training cross-entropy before each epoch and after the last one.
  std::vector<double> loss_history;

  /// N x C class probabilities; rows sum to 1.
  RowMatrix predict_proba(const PointCloud& pc) const;
};

struct FitConfig {
  double lr = 0.1;
  std::size_t epochs = 200;
  /// 0 = full batch. Otherwise the seed drives the per-epoch shuffle.
  std::size_t batch_size = 0;
  std::uint64_t seed = 0;
  /// 0 = infer from labels.
  int classes = 0;
};

struct SoftmaxGradient {
  double loss = 0.0;
  Eigen::MatrixXd d_weights;
  Eigen::VectorXd d_bias;
};

/// Mean cross-entropy of a linear softmax model on already-standardized
/// features, and its exact gradient.
SoftmaxGradient softmax_loss_gradient(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias,
                                      const RowMatrix& x, std::span<const int> labels);

/// Row-wise softmax of x * W^T + b, max-shifted.
RowMatrix softmax_probabilities(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias,
                                const RowMatrix& x);

/// Gradient descent on cross-entropy from zero weights, standardized features.
SoftmaxModel softmax_fit(const PointCloud& pc, const FitConfig& cfg);
SoftmaxModel softmax_fit(const PointCloud& pc, double lr, std::size_t epochs, std::uint64_t seed);

// ---------------------------------------------------------------- AUC

/// Mann-Whitney estimate (#{pos > neg} + 0.5 #{pos = neg}) / (#pos #neg).
/// Labels are 0 (negative) or 1 (positive).
double auc_binary(std::span<const double> scores, std::span<const int> labels);

/// Hand & Till one-vs-one average over unordered class pairs.
/// `probabilities` is N x C, labels are class ids 0..C-1.
double auc_ovo(const RowMatrix& probabilities, std::span<const int> labels);

}  // namespace sepph
