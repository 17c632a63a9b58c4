#pragma once

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sepph/geometry.hpp"
#include "sepph/learners.hpp"
#include "sepph/metrics.hpp"
#include "sepph/summaries.hpp"

namespace sepph::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchema = 1;

/// Which metrics to compute; unset flags fall back to "everything the data allows".
struct MetricSelection {
  bool thornton = false;
  bool roc_auc = false;
  bool ch = false;

  bool any() const noexcept { return thornton || roc_auc || ch; }
  /// Resolves the defaults against label availability and rejects
  /// supervised requests on unlabelled data with MissingLabels.
  MetricSelection resolve(bool labelled) const;
};

struct MetricSettings {
  double t = kDefaultThreshold;
  std::size_t bins = kDefaultBins;
  std::size_t k = kDefaultNeighbors;
  std::size_t clusters = kDefaultClusters;
  std::size_t splits = kDefaultSplits;
  std::uint64_t seed = 0;
  FitConfig fit;
};

struct EpochRecord {
  int epoch = 0;
  std::size_t n_points = 0;
  std::size_t n_bars = 0;
  double p_lt_t = 0.0;
  std::optional<double> thornton;
  std::optional<ChIndex> ch;
  std::optional<MetricReport> roc_auc;
  std::optional<double> density_distance_to_previous;
  Density histogram;
};

struct RunReport {
  std::string run_id;
  MetricSettings settings;
  MetricSelection selection;
  double delta = 0.01;
  std::size_t window = 3;
  std::vector<EpochRecord> records;
  /// Per metric, divided by its maximum over the run; absent when the
  /// series cannot be normalized (all zero, or an infinite CH value).
  std::map<std::string, std::optional<std::vector<double>>> normalized;
  std::optional<int> convergence_epoch;
  /// Per-epoch normalized persistences; kept for plotting, not serialized.
  std::vector<NormalizedPersistences> persistences;
};

/// Computes everything for one snapshot. The normalized persistences are
/// handed back through `persistences` when it is non-null.
EpochRecord summarize_snapshot(const PointCloud& pc, int epoch, const MetricSettings& settings,
                               const MetricSelection& selection, NormalizedPersistences* persistences = nullptr);

/// Per-epoch records (epochs evaluated concurrently), consecutive density
/// distances, normalized series and the convergence epoch of p_lt_t.
RunReport build_run_report(const std::string& run_id, const std::vector<PointCloud>& snapshots,
                           const std::vector<int>& epochs, const MetricSettings& settings,
                           const MetricSelection& selection, double delta, std::size_t window);

Json to_json(const MetricReport& m);
Json to_json(const Density& d);
Json to_json(const RunReport& r);

/// Series keyed like RunReport::normalized, raw values.
std::map<std::string, std::vector<std::optional<double>>> raw_series(const RunReport& r);

}  // namespace sepph::cli
