#include <algorithm>
#include <numeric>

#include "sepph/kernels.hpp"

namespace sepph::kernels::serial {

Eigen::MatrixXd pairwise_distances(const RowMatrix& points) {
  const Eigen::Index n = points.rows();
  const Eigen::Index d = points.cols();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dist = euclidean(points.data() + i * d, points.data() + j * d, d);
      out(i, j) = dist;
      out(j, i) = dist;
    }
  }
  return out;
}

std::vector<Edge> sorted_edges(const Eigen::MatrixXd& dm) {
  const auto n = static_cast<std::uint32_t>(dm.rows());
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n > 0 ? n - 1 : 0) / 2);
  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t v = u + 1; v < n; ++v) edges.push_back({dm(u, v), u, v});
  std::sort(edges.begin(), edges.end());
  return edges;
}

NeighborTable nearest_neighbors(const Eigen::MatrixXd& dm, std::size_t k) {
  const auto n = static_cast<std::size_t>(dm.rows());
  NeighborTable table(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i) {
    order.resize(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    order.erase(order.begin() + static_cast<std::ptrdiff_t>(i));
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double da = dm(i, a), db = dm(i, b);
      return da != db ? da < db : a < b;
    });
    for (std::size_t r = 0; r < k; ++r) table(i, r) = order[r];
  }
  return table;
}

void assign_to_centroids(const RowMatrix& points, const RowMatrix& centroids,
                         std::span<int> assignment, std::span<double> sq_dist) {
  const Eigen::Index d = points.cols();
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    int best = 0;
    double best_d = squared_euclidean(points.data() + i * d, centroids.data(), d);
    for (Eigen::Index c = 1; c < centroids.rows(); ++c) {
      const double dist = squared_euclidean(points.data() + i * d, centroids.data() + c * d, d);
      if (dist < best_d) {
        best_d = dist;
        best = static_cast<int>(c);
      }
    }
    assignment[static_cast<std::size_t>(i)] = best;
    sq_dist[static_cast<std::size_t>(i)] = best_d;
  }
}

}  // namespace sepph::kernels::serial
