#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "cli/report.hpp"
#include "sepph/synth.hpp"
#include "sepph/toylab.hpp"

namespace sepph::cli {

namespace fs = std::filesystem;

struct GenOptions {
  SynthConfig synth;
  fs::path out;
};
/// Writes the dataset as a labelled snapshot; returns its digest.
Json cmd_gen(const GenOptions& opt);
Json dataset_digest(const PointCloud& pc);

struct H0Options {
  fs::path snapshot;
  double t = kDefaultThreshold;
  std::size_t bins = kDefaultBins;
  bool include_values = false;
  std::uint64_t seed = 0;
};
Json cmd_h0(const H0Options& opt);
/// The h0 report for an in-memory cloud; cmd_h0 is this plus file loading.
Json h0_report(const PointCloud& pc, const H0Options& opt);

struct SeparabilityOptions {
  fs::path snapshot;
  std::optional<fs::path> labels;
  MetricSelection selection;
  MetricSettings settings;
};
Json cmd_separability(const SeparabilityOptions& opt);
Json separability_report(const PointCloud& pc, const SeparabilityOptions& opt);

struct TrackOptions {
  fs::path manifest;
  std::optional<fs::path> out;  // default: run_report.json next to the manifest
  MetricSelection selection;
  MetricSettings settings;
  double delta = 0.01;
  std::size_t window = 3;
  bool plot = false;
};
struct TrackResult {
  RunReport report;
  fs::path report_path;
  std::vector<fs::path> artifacts;  // CSV and SVG side files
};
TrackResult cmd_track(const TrackOptions& opt);

struct ToyOptions {
  ToyExperimentConfig experiment;
  fs::path out_dir = "toy_runs";
  /// Snapshot every n-th epoch (epoch 0 and the last epoch always); 0 = none.
  std::size_t snapshot_stride = 1;
  double t = kDefaultThreshold;
};
struct ToyResult {
  std::vector<ToyRunSummary> runs;
  fs::path summary_csv;
  fs::path persistences_csv;
  std::vector<fs::path> manifests;
};
ToyResult cmd_toy(const ToyOptions& opt);
Json toy_digest(const ToyResult& result, double t);

}  // namespace sepph::cli
