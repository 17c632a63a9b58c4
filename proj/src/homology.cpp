#include "sepph/homology.hpp"

#include <algorithm>
#include <numeric>

#include "sepph/error.hpp"
#include "sepph/kernels.hpp"

namespace sepph {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) noexcept {
    std::size_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) x = std::exchange(parent_[x], root);
    return root;
  }

  bool unite(std::size_t a, std::size_t b) noexcept {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned> rank_;
};

// Sparse Z/2 column, row indices kept sorted ascending.
using Column = std::vector<std::size_t>;

void add_columns(Column& target, const Column& source) {
  Column sum;
  sum.reserve(target.size() + source.size());
  std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                std::back_inserter(sum));
  target.swap(sum);
}

}  // namespace

std::vector<double> PersistenceDiagram::deaths() const {
  std::vector<double> out;
  out.reserve(finite_bars.size());
  for (const auto& b : finite_bars) out.push_back(b.death);
  return out;
}

PersistenceDiagram h0_persistence(const DistanceMatrix& dm) {
  const std::size_t n = dm.size();
  if (n == 0) throw InvalidArgument("empty input");

  PersistenceDiagram pd;
  pd.has_infinite_bar = true;
  pd.finite_bars.reserve(n - 1);
  if (n == 1) return pd;

  DisjointSets sets(n);
  for (const auto& e : kernels::sorted_edges(dm.entries())) {
    if (sets.unite(e.u, e.v)) {
      pd.finite_bars.push_back({0.0, e.length});
      if (pd.finite_bars.size() == n - 1) break;
    }
  }
  return pd;
}

PersistenceDiagram h0_persistence_oracle(const DistanceMatrix& dm, std::size_t max_points) {
  const std::size_t n = dm.size();
  if (n < 2) throw InvalidArgument("oracle requires at least two points");
  if (n > max_points) throw InvalidArgument("oracle size limit");

  // Filtration order: the n vertices (value 0), then edges by (length, u, v).
  // Simplex index s < n is vertex s; s >= n is edge s - n.
  const auto edges = kernels::serial::sorted_edges(dm.entries());

  // Boundary matrix restricted to edge columns (vertex columns are zero).
  std::vector<Column> boundary(edges.size());
  for (std::size_t j = 0; j < edges.size(); ++j) boundary[j] = {edges[j].u, edges[j].v};

  // low -> column that owns that pivot.
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> pivot_owner(n, kNone);
  std::vector<bool> vertex_paired(n, false);

  PersistenceDiagram pd;
  for (std::size_t j = 0; j < boundary.size(); ++j) {
    Column& col = boundary[j];
    while (!col.empty() && pivot_owner[col.back()] != kNone) add_columns(col, boundary[pivot_owner[col.back()]]);
    if (col.empty()) continue;  // edge closes a cycle: creates an H1 class, no H0 event
    const std::size_t low = col.back();
    pivot_owner[low] = j;
    vertex_paired[low] = true;
    // Vertex `low` (born at 0) dies when edge j enters.
    pd.finite_bars.push_back({0.0, edges[j].length});
  }

  const auto unpaired = std::count(vertex_paired.begin(), vertex_paired.end(), false);
  pd.has_infinite_bar = unpaired > 0;
  if (unpaired != 1) throw Error("oracle reduction left " + std::to_string(unpaired) + " essential classes");
  return pd;
}

NormalizedPersistences normalize_diagram(const PersistenceDiagram& pd) {
  if (pd.finite_bars.empty()) throw InvalidArgument("degenerate diagram");
  NormalizedPersistences out;
  out.values.reserve(pd.finite_bars.size());
  double max_p = 0.0;
  for (const auto& b : pd.finite_bars) {
    out.values.push_back(b.persistence());
    max_p = std::max(max_p, b.persistence());
  }
  if (max_p > 0.0)
    for (double& v : out.values) v /= max_p;
  return out;
}

NormalizedPersistences normalized_h0(const PointCloud& pc) {
  return normalize_diagram(h0_persistence(pairwise_distances(pc)));
}

}  // namespace sepph
