#include "sepph/summaries.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "sepph/error.hpp"

namespace sepph {

void StatisticSeries::validate() const {
  if (epochs.size() != values.size()) throw InvalidArgument("series epochs and values differ in length");
  for (std::size_t i = 1; i < epochs.size(); ++i)
    if (epochs[i] <= epochs[i - 1]) throw InvalidArgument("series epochs must be strictly increasing");
}

double persistence_statistic(const NormalizedPersistences& np, double t) {
  if (np.values.empty()) throw InvalidArgument("no finite bars");
  if (!std::isfinite(t)) throw InvalidArgument("threshold must be finite");
  const auto below = std::count_if(np.values.begin(), np.values.end(), [t](double v) { return v < t; });
  return static_cast<double>(below) / static_cast<double>(np.values.size());
}

Density persistence_density(const NormalizedPersistences& np, std::size_t bins) {
  if (bins < 1) throw InvalidArgument("bins must be >= 1");
  if (np.values.empty()) throw InvalidArgument("no finite bars");

  Density d;
  d.bin_edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) d.bin_edges[i] = static_cast<double>(i) / static_cast<double>(bins);
  d.masses.assign(bins, 0.0);

  const double b = static_cast<double>(bins);
  for (double v : np.values) {
    auto idx = static_cast<std::size_t>(std::clamp(std::floor(v * b), 0.0, b - 1.0));
    d.masses[idx] += 1.0;
  }
  const double n = static_cast<double>(np.values.size());
  for (double& m : d.masses) m /= n;
  return d;
}

double density_distance(const NormalizedPersistences& a, const NormalizedPersistences& b) {
  if (a.values.empty() || b.values.empty()) throw InvalidArgument("no finite bars");
  std::vector<double> xa = a.values, xb = b.values;
  std::sort(xa.begin(), xa.end());
  std::sort(xb.begin(), xb.end());

  // Sweep the merged breakpoints; both CDFs are constant between them.
  const double na = static_cast<double>(xa.size());
  const double nb = static_cast<double>(xb.size());
  std::size_t ia = 0, ib = 0;
  double area = 0.0;
  double x = std::min(xa.front(), xb.front());
  while (ia < xa.size() || ib < xb.size()) {
    const double next = std::min(ia < xa.size() ? xa[ia] : INFINITY, ib < xb.size() ? xb[ib] : INFINITY);
    const double fa = static_cast<double>(ia) / na;
    const double fb = static_cast<double>(ib) / nb;
    area += std::abs(fa - fb) * (next - x);
    x = next;
    while (ia < xa.size() && xa[ia] == x) ++ia;
    while (ib < xb.size() && xb[ib] == x) ++ib;
  }
  return area;
}

std::optional<int> detect_convergence(const StatisticSeries& series, double delta, std::size_t window) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be > 0");
  if (window < 1) throw InvalidArgument("window must be >= 1");
  series.validate();
  std::size_t run = 0;
  for (std::size_t i = 1; i < series.values.size(); ++i) {
    run = std::abs(series.values[i] - series.values[i - 1]) < delta ? run + 1 : 0;
    if (run >= window) return series.epochs[i];
  }
  return std::nullopt;
}

double silverman_bandwidth(std::vector<double> values) {
  const auto n = values.size();
  if (n < 2) return 0.0;
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));

  std::sort(values.begin(), values.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, n - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  const double iqr = quantile(0.75) - quantile(0.25);
  double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

std::vector<double> smoothed_density(const NormalizedPersistences& np, const std::vector<double>& grid) {
  if (np.values.empty()) throw InvalidArgument("no finite bars");
  double h = silverman_bandwidth(np.values);
  if (h <= 0.0) h = 1e-2;
  const double norm = 1.0 / (static_cast<double>(np.values.size()) * h * std::sqrt(2.0 * std::numbers::pi));
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double acc = 0.0;
    for (double v : np.values) {
      const double z = (grid[g] - v) / h;
      acc += std::exp(-0.5 * z * z);
    }
    out[g] = acc * norm;
  }
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("median of empty sample");
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (values.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace sepph
