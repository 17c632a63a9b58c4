#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sepph/geometry.hpp"
#include "sepph/learners.hpp"

namespace sepph {

struct MetricReport {
  std::string name;
  double value = 0.0;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  std::optional<int> epoch;
};

enum class ThorntonVariant {
  /// Mean over all (point, neighbor) pairs of label agreement.
  PerNeighbor,
  /// Fraction of points whose k neighbors all share its label.
  AllAgree,
};

inline constexpr std::size_t kDefaultNeighbors = 5;
inline constexpr std::size_t kDefaultClusters = 5;
inline constexpr std::size_t kDefaultSplits = 5;

double thornton_index(const PointCloud& pc, std::size_t k = kDefaultNeighbors,
                      ThorntonVariant variant = ThorntonVariant::PerNeighbor);
/// Same, reusing a distance matrix of `pc`.
double thornton_index(const PointCloud& pc, const DistanceMatrix& dm, std::size_t k = kDefaultNeighbors,
                      ThorntonVariant variant = ThorntonVariant::PerNeighbor);

/// Calinski-Harabasz value; `infinite` is set when the within-cluster
/// dispersion is zero and `value` is then meaningless.
struct ChIndex {
  double value = 0.0;
  bool infinite = false;
};

/// (SS_B / (k - 1)) / (SS_W / (N - k)) over k-means assignments.
ChIndex calinski_harabasz(const PointCloud& pc, std::size_t k, std::uint64_t seed);
/// The ratio for a given partition; exposed for checking the formula.
ChIndex calinski_harabasz_of(const PointCloud& pc, const std::vector<int>& assignments, std::size_t k);

/// Stratified n-fold cross-validated AUC of a softmax classifier: mean with a
/// two-sided 95% Student-t interval over the fold values.
MetricReport roc_auc_n(const PointCloud& pc, std::size_t n, std::uint64_t seed,
                       const FitConfig& fit = FitConfig{});

/// Fold id per point: each class is shuffled and dealt round-robin.
std::vector<std::size_t> stratified_folds(const std::vector<int>& labels, std::size_t n, std::uint64_t seed);

/// Divides by the maximum so the largest value becomes exactly 1.
std::vector<double> normalize_series(const std::vector<double>& values);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace sepph
