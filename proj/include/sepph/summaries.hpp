#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sepph/homology.hpp"

namespace sepph {

inline constexpr double kDefaultThreshold = 0.6;
inline constexpr std::size_t kDefaultBins = 50;

/// Equal-width histogram of normalized persistence times on [0, 1].
struct Density {
  std::vector<double> bin_edges;  // B + 1 values, 0 .. 1
  std::vector<double> masses;     // B values summing to 1
};

/// One scalar per tracked epoch.
struct StatisticSeries {
  std::vector<int> epochs;  // strictly increasing
  std::vector<double> values;

  void validate() const;
};

/// Fraction of values strictly below t.
double persistence_statistic(const NormalizedPersistences& np, double t = kDefaultThreshold);

/// Bins are [i/B, (i+1)/B) except the last, which also holds 1.
Density persistence_density(const NormalizedPersistences& np, std::size_t bins = kDefaultBins);

/// 1-Wasserstein distance between the two empirical distributions, i.e. the
/// integral of |F_a - F_b| over the real line.
double density_distance(const NormalizedPersistences& a, const NormalizedPersistences& b);

/// Earliest epoch e such that the `window` successive differences ending at e
/// are all below delta in absolute value.
std::optional<int> detect_convergence(const StatisticSeries& series, double delta, std::size_t window);

/// Gaussian kernel density estimate evaluated on `grid`, bandwidth from
/// Silverman's rule. Intended for plotting only.
std::vector<double> smoothed_density(const NormalizedPersistences& np, const std::vector<double>& grid);

/// Silverman's rule of thumb: 0.9 * min(sd, IQR / 1.34) * n^(-1/5).
double silverman_bandwidth(std::vector<double> values);

/// Middle value; mean of the two middle values for even sizes.
double median(std::vector<double> values);

}  // namespace sepph
