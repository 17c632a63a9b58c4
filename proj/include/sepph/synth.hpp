#pragma once

#include <cstddef>
#include <cstdint>

#include "sepph/geometry.hpp"

namespace sepph {

struct SynthConfig {
  std::size_t n_samples = 2000;
  std::size_t n_features = 40;
  std::size_t n_classes = 2;
  std::size_t clusters_per_class = 1;
  double class_sep = 1.0;
  std::uint64_t seed = 0;

  /// Throws InvalidArgument when the configuration cannot be realized.
  void validate() const;
};

/// Labelled Gaussian clusters centred on distinct vertices of the hypercube
/// {-class_sep, +class_sep}^n_features.
///
/// Cluster c belongs to class c mod n_classes. Class sizes differ by at most
/// one; within a class, points are dealt round-robin over its clusters. Each
/// point is its centre plus unit-variance isotropic noise. Rows are shuffled.
/// All randomness comes from CounterRng(seed), so output is bit-reproducible.
PointCloud make_classification(const SynthConfig& cfg);

}  // namespace sepph
