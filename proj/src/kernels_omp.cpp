#include <parallel/algorithm>

#include <algorithm>
#include <numeric>

#include "sepph/kernels.hpp"

namespace sepph::kernels {

Eigen::MatrixXd pairwise_distances(const RowMatrix& points) {
  const Eigen::Index n = points.rows();
  const Eigen::Index d = points.cols();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
#pragma omp parallel for schedule(dynamic, 16)
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
  const auto n = static_cast<std::int64_t>(dm.rows());
  const std::size_t m = static_cast<std::size_t>(n) * static_cast<std::size_t>(n > 0 ? n - 1 : 0) / 2;
  std::vector<Edge> edges(m);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t u = 0; u < n; ++u) {
    // Row u starts after sum_{r<u} (n-1-r) edges.
    std::size_t pos = static_cast<std::size_t>(u) * static_cast<std::size_t>(2 * n - u - 1) / 2;
    for (std::int64_t v = u + 1; v < n; ++v)
      edges[pos++] = {dm(u, v), static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v)};
  }
  // (length, u, v) is a strict total order, so any correct sort yields the
  // same sequence as the serial one.
  __gnu_parallel::sort(edges.begin(), edges.end());
  return edges;
}

NeighborTable nearest_neighbors(const Eigen::MatrixXd& dm, std::size_t k) {
  const auto n = static_cast<std::int64_t>(dm.rows());
  NeighborTable table(n, static_cast<Eigen::Index>(k));
#pragma omp parallel
  {
    std::vector<std::size_t> order;
#pragma omp for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < n; ++i) {
      order.clear();
      for (std::int64_t j = 0; j < n; ++j)
        if (j != i) order.push_back(static_cast<std::size_t>(j));
      auto closer = [&](std::size_t a, std::size_t b) {
        const double da = dm(i, static_cast<Eigen::Index>(a));
        const double db = dm(i, static_cast<Eigen::Index>(b));
        return da != db ? da < db : a < b;
      };
      std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), closer);
      for (std::size_t r = 0; r < k; ++r) table(i, static_cast<Eigen::Index>(r)) = order[r];
    }
  }
  return table;
}

void assign_to_centroids(const RowMatrix& points, const RowMatrix& centroids,
                         std::span<int> assignment, std::span<double> sq_dist) {
  const Eigen::Index d = points.cols();
  const Eigen::Index n = points.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
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

}  // namespace sepph::kernels
