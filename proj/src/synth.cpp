#include "sepph/synth.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "sepph/error.hpp"
#include "sepph/rng.hpp"

namespace sepph {

void SynthConfig::validate() const {
  if (n_features < 1) throw InvalidArgument("n_features must be >= 1");
  if (n_classes < 1) throw InvalidArgument("n_classes must be >= 1");
  if (clusters_per_class < 1) throw InvalidArgument("clusters_per_class must be >= 1");
  if (!(class_sep > 0.0) || !std::isfinite(class_sep)) throw InvalidArgument("class_sep must be > 0");
  if (n_samples < n_classes) throw InvalidArgument("n_samples must be >= n_classes");
  const std::size_t centers = n_classes * clusters_per_class;
  if (n_features < 63 && centers > (std::size_t{1} << n_features))
    throw InvalidArgument("n_classes * clusters_per_class exceeds the 2^n_features hypercube vertices");
}

namespace {

// Distinct vertex ids, each a bit pattern of n_features sign bits.
std::vector<std::vector<bool>> pick_vertices(std::size_t count, std::size_t n_features, CounterRng& rng) {
  std::vector<std::vector<bool>> out;
  std::set<std::vector<bool>> seen;
  if (n_features < 63) {
    // Floyd's sampling of `count` distinct integers below 2^n_features.
    const std::uint64_t range = std::uint64_t{1} << n_features;
    std::set<std::uint64_t> taken;
    std::vector<std::uint64_t> ids;
    for (std::uint64_t j = range - count; j < range; ++j) {
      const std::uint64_t t = rng.below(j + 1);
      const std::uint64_t pick = taken.contains(t) ? j : t;
      taken.insert(pick);
      ids.push_back(pick);
    }
    for (auto id : ids) {
      std::vector<bool> bits(n_features);
      for (std::size_t b = 0; b < n_features; ++b) bits[b] = (id >> b) & 1U;
      out.push_back(std::move(bits));
    }
  } else {
    while (out.size() < count) {
      std::vector<bool> bits(n_features);
      for (std::size_t b = 0; b < n_features; ++b) bits[b] = rng.next_u64() >> 63;
      if (seen.insert(bits).second) out.push_back(std::move(bits));
    }
  }
  return out;
}

}  // namespace

PointCloud make_classification(const SynthConfig& cfg) {
  cfg.validate();
  CounterRng rng(cfg.seed);
  const std::size_t n_clusters = cfg.n_classes * cfg.clusters_per_class;
  const auto vertices = pick_vertices(n_clusters, cfg.n_features, rng);

  const auto d = static_cast<Eigen::Index>(cfg.n_features);
  RowMatrix centers(static_cast<Eigen::Index>(n_clusters), d);
  for (std::size_t c = 0; c < n_clusters; ++c)
    for (Eigen::Index b = 0; b < d; ++b)
      centers(static_cast<Eigen::Index>(c), b) = vertices[c][static_cast<std::size_t>(b)] ? cfg.class_sep : -cfg.class_sep;

  // Class sizes n/C, the first n mod C classes get one extra.
  std::vector<int> labels;
  std::vector<std::size_t> cluster_of;
  labels.reserve(cfg.n_samples);
  for (std::size_t cls = 0; cls < cfg.n_classes; ++cls) {
    const std::size_t size = cfg.n_samples / cfg.n_classes + (cls < cfg.n_samples % cfg.n_classes ? 1 : 0);
    for (std::size_t r = 0; r < size; ++r) {
      labels.push_back(static_cast<int>(cls));
      // The class's clusters are cls, cls + C, cls + 2C, ...
      cluster_of.push_back(cls + (r % cfg.clusters_per_class) * cfg.n_classes);
    }
  }

  RowMatrix points(static_cast<Eigen::Index>(cfg.n_samples), d);
  for (std::size_t i = 0; i < cfg.n_samples; ++i)
    for (Eigen::Index b = 0; b < d; ++b)
      points(static_cast<Eigen::Index>(i), b) = centers(static_cast<Eigen::Index>(cluster_of[i]), b) + rng.normal();

  std::vector<std::size_t> order(cfg.n_samples);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order);
  RowMatrix shuffled(points.rows(), d);
  std::vector<int> shuffled_labels(cfg.n_samples);
  for (std::size_t r = 0; r < order.size(); ++r) {
    shuffled.row(static_cast<Eigen::Index>(r)) = points.row(static_cast<Eigen::Index>(order[r]));
    shuffled_labels[r] = labels[order[r]];
  }
  return PointCloud(std::move(shuffled), std::move(shuffled_labels));
}

}  // namespace sepph
