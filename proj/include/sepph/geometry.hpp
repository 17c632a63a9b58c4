#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace sepph {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// N points in R^d, optionally labelled with class ids 0..C-1.
///
/// Construction validates the invariants: d >= 1, finite coordinates, and
/// one nonnegative label per point when labels are given. N = 0 is allowed
/// so that callers can report "empty input" at the operation that needs data.
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(RowMatrix points, std::optional<std::vector<int>> labels = std::nullopt);

  std::size_t size() const noexcept { return static_cast<std::size_t>(points_.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(points_.cols()); }
  bool empty() const noexcept { return points_.rows() == 0; }

  const RowMatrix& points() const noexcept { return points_; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {points_.data() + i * dim(), dim()};
  }

  bool has_labels() const noexcept { return labels_.has_value(); }
  /// Throws MissingLabels when the cloud is unlabelled.
  const std::vector<int>& labels() const;
  /// max(label) + 1; 0 for an unlabelled or empty cloud.
  int num_classes() const noexcept { return num_classes_; }

  PointCloud with_labels(std::vector<int> labels) const;
  PointCloud without_labels() const;
  PointCloud subset(std::span<const std::size_t> indices) const;
  PointCloud scaled(double c) const;

 private:
  RowMatrix points_;
  std::optional<std::vector<int>> labels_;
  int num_classes_ = 0;
};

/// Symmetric N x N matrix of nonnegative finite distances with zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  /// Validates symmetry, zero diagonal and nonnegativity.
  explicit DistanceMatrix(Eigen::MatrixXd entries);

  std::size_t size() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Eigen::MatrixXd& entries() const noexcept { return entries_; }

  /// Wraps a matrix already known to satisfy the invariants.
  static DistanceMatrix trusted(Eigen::MatrixXd entries) noexcept;

 private:
  Eigen::MatrixXd entries_;
};

/// Euclidean distance matrix. Entries do not depend on the thread count.
DistanceMatrix pairwise_distances(const PointCloud& pc);

/// Largest entry; 0 for a single point.
double diameter(const DistanceMatrix& dm);

}  // namespace sepph
