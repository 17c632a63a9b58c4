#pragma once

// Data-parallel inner loops. Every kernel has an OpenMP version (used by the
// library) and a straight serial version in `kernels::serial` that is kept as
// the reference for tests and benchmarks. Both produce bit-identical output.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sepph/geometry.hpp"

namespace sepph::kernels {

struct Edge {
  double length;
  std::uint32_t u;  // u < v
  std::uint32_t v;

  friend bool operator<(const Edge& a, const Edge& b) noexcept {
    if (a.length != b.length) return a.length < b.length;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  }
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Row-major N x k matrix of neighbor indices.
using NeighborTable = Eigen::Matrix<std::size_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::MatrixXd pairwise_distances(const RowMatrix& points);

/// All N(N-1)/2 edges sorted by (length, u, v).
std::vector<Edge> sorted_edges(const Eigen::MatrixXd& dm);

/// k nearest other points of every point, ties broken by lower index.
NeighborTable nearest_neighbors(const Eigen::MatrixXd& dm, std::size_t k);

/// Nearest centroid (lowest index on ties) and squared distance for every point.
void assign_to_centroids(const RowMatrix& points, const RowMatrix& centroids,
                         std::span<int> assignment, std::span<double> sq_dist);

namespace serial {
Eigen::MatrixXd pairwise_distances(const RowMatrix& points);
std::vector<Edge> sorted_edges(const Eigen::MatrixXd& dm);
NeighborTable nearest_neighbors(const Eigen::MatrixXd& dm, std::size_t k);
void assign_to_centroids(const RowMatrix& points, const RowMatrix& centroids,
                         std::span<int> assignment, std::span<double> sq_dist);
}  // namespace serial

// Shared by both versions so they cannot drift apart.
inline double euclidean(const double* a, const double* b, Eigen::Index d) noexcept {
  double acc = 0.0;
  for (Eigen::Index c = 0; c < d; ++c) {
    const double diff = a[c] - b[c];
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

inline double squared_euclidean(const double* a, const double* b, Eigen::Index d) noexcept {
  double acc = 0.0;
  for (Eigen::Index c = 0; c < d; ++c) {
    const double diff = a[c] - b[c];
    acc += diff * diff;
  }
  return acc;
}

}  // namespace sepph::kernels
