#include "sepph/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "sepph/error.hpp"
#include "sepph/kernels.hpp"

namespace sepph {

PointCloud::PointCloud(RowMatrix points, std::optional<std::vector<int>> labels)
    : points_(std::move(points)), labels_(std::move(labels)) {
  if (points_.rows() > 0 && points_.cols() < 1) throw InvalidArgument("point dimension must be >= 1");
  if (!points_.allFinite()) throw InvalidArgument("point coordinates must be finite");
  if (labels_) {
    if (labels_->size() != size()) throw InvalidArgument("label count must equal point count");
    for (int l : *labels_) {
      if (l < 0) throw InvalidArgument("labels must be nonnegative class ids");
      num_classes_ = std::max(num_classes_, l + 1);
    }
  }
}

const std::vector<int>& PointCloud::labels() const {
  if (!labels_) throw MissingLabels("point cloud has no labels");
  return *labels_;
}

PointCloud PointCloud::with_labels(std::vector<int> labels) const {
  return PointCloud(points_, std::move(labels));
}

PointCloud PointCloud::without_labels() const { return PointCloud(points_); }

PointCloud PointCloud::subset(std::span<const std::size_t> indices) const {
  RowMatrix sub(static_cast<Eigen::Index>(indices.size()), points_.cols());
  std::optional<std::vector<int>> sub_labels;
  if (labels_) sub_labels.emplace().reserve(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    sub.row(static_cast<Eigen::Index>(r)) = points_.row(static_cast<Eigen::Index>(indices[r]));
    if (labels_) sub_labels->push_back((*labels_)[indices[r]]);
  }
  return PointCloud(std::move(sub), std::move(sub_labels));
}

PointCloud PointCloud::scaled(double c) const { return PointCloud(points_ * c, labels_); }

DistanceMatrix::DistanceMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) throw InvalidArgument("distance matrix must be square");
  const auto n = entries_.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (entries_(i, i) != 0.0) throw InvalidArgument("distance matrix diagonal must be zero");
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = entries_(i, j);
      if (!std::isfinite(v) || v < 0.0) throw InvalidArgument("distances must be finite and >= 0");
      if (v != entries_(j, i)) throw InvalidArgument("distance matrix must be symmetric");
    }
  }
}

DistanceMatrix DistanceMatrix::trusted(Eigen::MatrixXd entries) noexcept {
  DistanceMatrix dm;
  dm.entries_ = std::move(entries);
  return dm;
}

DistanceMatrix pairwise_distances(const PointCloud& pc) {
  if (pc.empty()) throw InvalidArgument("empty input");
  return DistanceMatrix::trusted(kernels::pairwise_distances(pc.points()));
}

double diameter(const DistanceMatrix& dm) {
  if (dm.size() == 0) throw InvalidArgument("empty input");
  return dm.entries().maxCoeff();
}

}  // namespace sepph
