#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sepph/geometry.hpp"

namespace sepph {

// Snapshot CSV: UTF-8, header `dim_0,...,dim_{d-1}[,label]`, one row per
// point, reals written in shortest round-trip form.

void write_snapshot(std::ostream& out, const PointCloud& pc);
void write_snapshot(const std::filesystem::path& path, const PointCloud& pc);
PointCloud read_snapshot(std::istream& in, const std::string& name = "<stream>");
PointCloud read_snapshot(const std::filesystem::path& path);

/// Label file: header `label`, one nonnegative integer per line.
std::vector<int> read_labels(const std::filesystem::path& path);
void write_labels(const std::filesystem::path& path, const std::vector<int>& labels);

/// Shortest decimal text that parses back to the same double.
std::string format_real(double v);

struct ManifestEpoch {
  int epoch = 0;
  std::string path;  // relative to the manifest's directory
};

struct SnapshotManifest {
  std::string run_id;
  std::vector<ManifestEpoch> epochs;
  std::optional<std::string> label_path;
  std::map<std::string, std::string> metadata;
};

/// Parses and validates: epochs strictly increasing, referenced files exist.
SnapshotManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const std::filesystem::path& path, const SnapshotManifest& manifest);

/// Loads every snapshot of a manifest. Labels from `label_path` override any
/// label column. Throws ShapeMismatch when N or d differ across epochs.
std::vector<PointCloud> load_run(const SnapshotManifest& manifest, const std::filesystem::path& base_dir);

}  // namespace sepph
