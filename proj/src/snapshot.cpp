#include "sepph/snapshot.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

#include "sepph/error.hpp"

namespace sepph {

namespace fs = std::filesystem;

std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string_view trim_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& v) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool parse_int(std::string_view s, int& v) {
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  return !s.empty() && res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return in;
}

}  // namespace

void write_snapshot(std::ostream& out, const PointCloud& pc) {
  const std::size_t d = pc.dim();
  for (std::size_t c = 0; c < d; ++c) out << (c ? "," : "") << "dim_" << c;
  if (pc.has_labels()) out << ",label";
  out << '\n';
  for (std::size_t i = 0; i < pc.size(); ++i) {
    const auto row = pc.row(i);
    for (std::size_t c = 0; c < d; ++c) out << (c ? "," : "") << format_real(row[c]);
    if (pc.has_labels()) out << ',' << pc.labels()[i];
    out << '\n';
  }
}

void write_snapshot(const fs::path& path, const PointCloud& pc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_snapshot(out, pc);
  if (!out) throw Error("write failed for " + path.string());
}

PointCloud read_snapshot(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(name, 1, "missing header");
  const auto header = split_commas(trim_cr(line));
  std::size_t d = header.size();
  const bool labelled = !header.empty() && header.back() == "label";
  if (labelled) --d;
  if (d < 1) throw ParseError(name, 1, "header must name at least one dim_ column");
  for (std::size_t c = 0; c < d; ++c)
    if (header[c] != "dim_" + std::to_string(c))
      throw ParseError(name, 1, "expected column dim_" + std::to_string(c) + ", found '" + std::string(header[c]) + "'");

  std::vector<double> coords;
  std::vector<int> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim_cr(line);
    if (text.empty()) continue;
    const auto fields = split_commas(text);
    if (fields.size() != header.size())
      throw ParseError(name, line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                                          std::to_string(fields.size()));
    for (std::size_t c = 0; c < d; ++c) {
      double v;
      if (!parse_double(fields[c], v) || !std::isfinite(v))
        throw ParseError(name, line_no, "invalid real '" + std::string(fields[c]) + "' in column dim_" + std::to_string(c));
      coords.push_back(v);
    }
    if (labelled) {
      int l;
      if (!parse_int(fields[d], l) || l < 0)
        throw ParseError(name, line_no, "invalid label '" + std::string(fields[d]) + "'");
      labels.push_back(l);
    }
  }
  const auto n = static_cast<Eigen::Index>(coords.size() / d);
  RowMatrix pts = Eigen::Map<RowMatrix>(coords.data(), n, static_cast<Eigen::Index>(d));
  if (labelled) return PointCloud(std::move(pts), std::move(labels));
  return PointCloud(std::move(pts));
}

PointCloud read_snapshot(const fs::path& path) {
  auto in = open_input(path);
  return read_snapshot(in, path.string());
}

std::vector<int> read_labels(const fs::path& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line) || trim_cr(line) != "label") throw ParseError(path.string(), 1, "expected header 'label'");
  std::vector<int> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim_cr(line);
    if (text.empty()) continue;
    int l;
    if (!parse_int(text, l) || l < 0) throw ParseError(path.string(), line_no, "invalid label '" + std::string(text) + "'");
    out.push_back(l);
  }
  return out;
}

void write_labels(const fs::path& path, const std::vector<int>& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "label\n";
  for (int l : labels) out << l << '\n';
}

SnapshotManifest load_manifest(const fs::path& path) {
  auto in = open_input(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string(), 0, std::string("invalid JSON: ") + e.what());
  }
  SnapshotManifest m;
  try {
    m.run_id = j.at("run_id").get<std::string>();
    for (const auto& e : j.at("epochs")) m.epochs.push_back({e.at("epoch").get<int>(), e.at("path").get<std::string>()});
    if (j.contains("label_path") && !j["label_path"].is_null()) m.label_path = j["label_path"].get<std::string>();
    if (j.contains("metadata"))
      for (const auto& [k, v] : j["metadata"].items()) m.metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 0, std::string("malformed manifest: ") + e.what());
  }
  if (m.epochs.empty()) throw ParseError(path.string(), 0, "manifest lists no epochs");
  for (std::size_t i = 1; i < m.epochs.size(); ++i)
    if (m.epochs[i].epoch <= m.epochs[i - 1].epoch)
      throw ParseError(path.string(), 0, "epochs must be strictly increasing (epoch " +
                                             std::to_string(m.epochs[i].epoch) + " follows " +
                                             std::to_string(m.epochs[i - 1].epoch) + ")");
  const auto base = path.parent_path();
  for (const auto& e : m.epochs)
    if (!fs::exists(base / e.path)) throw ParseError(path.string(), 0, "snapshot not found: " + e.path);
  if (m.label_path && !fs::exists(base / *m.label_path))
    throw ParseError(path.string(), 0, "label file not found: " + *m.label_path);
  return m;
}

void save_manifest(const fs::path& path, const SnapshotManifest& m) {
  nlohmann::ordered_json j;
  j["run_id"] = m.run_id;
  j["epochs"] = nlohmann::ordered_json::array();
  for (const auto& e : m.epochs) j["epochs"].push_back({{"epoch", e.epoch}, {"path", e.path}});
  if (m.label_path) j["label_path"] = *m.label_path;
  j["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.metadata) j["metadata"][k] = v;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::vector<PointCloud> load_run(const SnapshotManifest& m, const fs::path& base_dir) {
  std::optional<std::vector<int>> labels;
  if (m.label_path) labels = read_labels(base_dir / *m.label_path);
  std::vector<PointCloud> out;
  out.reserve(m.epochs.size());
  for (const auto& e : m.epochs) {
    PointCloud pc = read_snapshot(base_dir / e.path);
    if (!out.empty() && (pc.size() != out.front().size() || pc.dim() != out.front().dim()))
      throw ShapeMismatch("epoch " + std::to_string(e.epoch) + " has shape " + std::to_string(pc.size()) + "x" +
                          std::to_string(pc.dim()) + ", expected " + std::to_string(out.front().size()) + "x" +
                          std::to_string(out.front().dim()));
    if (labels) {
      if (labels->size() != pc.size())
        throw ShapeMismatch("label file has " + std::to_string(labels->size()) + " labels for " +
                            std::to_string(pc.size()) + " points");
      pc = pc.with_labels(*labels);
    }
    out.push_back(std::move(pc));
  }
  return out;
}

}  // namespace sepph
