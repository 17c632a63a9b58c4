#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sepph::cli {

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<std::optional<double>> y;  // gaps break the polyline
  std::string color;
};

struct SvgChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<SvgSeries> series;
  bool legend = true;
};

/// Self-contained line chart, axes scaled to the data range.
std::string render_svg(const SvgChart& chart);
void write_svg(const std::filesystem::path& path, const SvgChart& chart);

/// Blue-to-red ramp, t in [0, 1].
std::string ramp_color(double t);

}  // namespace sepph::cli
