#pragma once

#include <cstddef>
#include <vector>

#include "sepph/geometry.hpp"

namespace sepph {

struct Bar {
  double birth;
  double death;
  double persistence() const noexcept { return death - birth; }
  friend bool operator==(const Bar&, const Bar&) = default;
};

/// H0 diagram of a Vietoris-Rips filtration. The component that never dies
/// is carried as a flag rather than an infinite death value.
struct PersistenceDiagram {
  std::vector<Bar> finite_bars;
  bool has_infinite_bar = false;

  std::vector<double> deaths() const;
};

/// Finite persistence times divided by their maximum, in diagram order.
struct NormalizedPersistences {
  std::vector<double> values;
};

/// H0 persistence via Kruskal's minimum spanning tree.
///
/// Edges are processed in (length, min index, max index) order; each edge
/// joining two components closes one bar born at 0. The result has N-1 finite
/// bars in nondecreasing death order plus the infinite bar.
PersistenceDiagram h0_persistence(const DistanceMatrix& dm);

inline constexpr std::size_t kOracleDefaultLimit = 256;

/// Textbook H0 persistence: boundary matrix of the 1-skeleton filtration
/// (vertices at 0, then edges in the same order as h0_persistence), reduced
/// column by column over Z/2. A vertex row that becomes the lowest nonzero of
/// an edge column is paired with that edge; the single unpaired vertex is the
/// infinite bar.
///
/// Quadratic in the number of edges, hence the size limit.
PersistenceDiagram h0_persistence_oracle(const DistanceMatrix& dm,
                                         std::size_t max_points = kOracleDefaultLimit);

/// Drops the infinite bar and divides each finite persistence by the largest.
/// All-zero persistences (coincident points) map to all zeros.
NormalizedPersistences normalize_diagram(const PersistenceDiagram& pd);

/// pairwise_distances + h0_persistence + normalize_diagram.
NormalizedPersistences normalized_h0(const PointCloud& pc);

}  // namespace sepph
