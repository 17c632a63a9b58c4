#include "sepph/metrics.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>

#include "sepph/error.hpp"
#include "sepph/kernels.hpp"
#include "sepph/rng.hpp"

namespace sepph {

double thornton_index(const PointCloud& pc, std::size_t k, ThorntonVariant variant) {
  if (!pc.has_labels()) throw MissingLabels("Thornton index needs labels");
  if (pc.size() < 2) throw InvalidArgument("Thornton index needs at least two points");
  return thornton_index(pc, pairwise_distances(pc), k, variant);
}

double thornton_index(const PointCloud& pc, const DistanceMatrix& dm, std::size_t k, ThorntonVariant variant) {
  const auto& labels = pc.labels();
  const std::size_t n = pc.size();
  if (dm.size() != n) throw InvalidArgument("distance matrix does not match the point cloud");
  if (k < 1 || k > n - 1) throw InvalidArgument("k out of range");

  const auto table = kernels::nearest_neighbors(dm.entries(), k);
  std::size_t agree = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t same = 0;
    for (std::size_t r = 0; r < k; ++r)
      same += labels[table(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r))] == labels[i];
    agree += variant == ThorntonVariant::PerNeighbor ? same : (same == k ? 1 : 0);
  }
  const double denom = static_cast<double>(n) * (variant == ThorntonVariant::PerNeighbor ? static_cast<double>(k) : 1.0);
  return static_cast<double>(agree) / denom;
}

ChIndex calinski_harabasz_of(const PointCloud& pc, const std::vector<int>& assignments, std::size_t k) {
  const std::size_t n = pc.size();
  const RowMatrix& x = pc.points();
  if (assignments.size() != n) throw InvalidArgument("assignment count must equal point count");

  RowMatrix means = RowMatrix::Zero(static_cast<Eigen::Index>(k), x.cols());
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    means.row(assignments[i]) += x.row(static_cast<Eigen::Index>(i));
    ++counts[static_cast<std::size_t>(assignments[i])];
  }
  for (std::size_t c = 0; c < k; ++c)
    if (counts[c] > 0) means.row(static_cast<Eigen::Index>(c)) /= static_cast<double>(counts[c]);
  const Eigen::RowVectorXd overall = x.colwise().mean();

  double ss_b = 0.0, ss_w = 0.0;
  for (std::size_t c = 0; c < k; ++c)
    ss_b += static_cast<double>(counts[c]) * (means.row(static_cast<Eigen::Index>(c)) - overall).squaredNorm();
  for (std::size_t i = 0; i < n; ++i)
    ss_w += (x.row(static_cast<Eigen::Index>(i)) - means.row(assignments[i])).squaredNorm();

  if (ss_w == 0.0) return {0.0, true};
  return {(ss_b / static_cast<double>(k - 1)) / (ss_w / static_cast<double>(n - k)), false};
}

ChIndex calinski_harabasz(const PointCloud& pc, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("Calinski-Harabasz needs k >= 2");
  if (pc.size() <= k) throw InvalidArgument("Calinski-Harabasz needs N > k");
  return calinski_harabasz_of(pc, kmeans(pc, k, seed).assignments, k);
}

std::vector<std::size_t> stratified_folds(const std::vector<int>& labels, std::size_t n, std::uint64_t seed) {
  int classes = 0;
  for (int l : labels) classes = std::max(classes, l + 1);
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(classes));
  for (std::size_t i = 0; i < labels.size(); ++i) members[static_cast<std::size_t>(labels[i])].push_back(i);

  std::vector<std::size_t> fold(labels.size());
  std::size_t offset = 0;  // continues the deal across classes to balance fold sizes
  for (std::size_t c = 0; c < members.size(); ++c) {
    auto& m = members[c];
    if (m.empty()) continue;
    if (m.size() < n) throw InvalidArgument("cannot stratify");
    CounterRng rng(derive_seed(seed, {c}));
    rng.shuffle(m);
    for (std::size_t r = 0; r < m.size(); ++r) fold[m[r]] = (offset + r) % n;
    offset = (offset + m.size()) % n;
  }
  return fold;
}

MetricReport roc_auc_n(const PointCloud& pc, std::size_t n, std::uint64_t seed, const FitConfig& fit) {
  if (!pc.has_labels()) throw MissingLabels("ROC-AUC needs labels");
  if (n < 2) throw InvalidArgument("ROC-AUC-n needs n >= 2");
  const auto& labels = pc.labels();
  const int classes = pc.num_classes();
  if (classes < 2) throw InvalidArgument("degenerate labels");

  const auto fold = stratified_folds(labels, n, seed);
  std::vector<double> scores(n);
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t f = 0; f < n; ++f) {
    try {
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < fold.size(); ++i) (fold[i] == f ? test : train).push_back(i);
    FitConfig cfg = fit;
    cfg.classes = classes;
    cfg.seed = derive_seed(seed, {f});
    const auto model = softmax_fit(pc.subset(train), cfg);
    const auto held = pc.subset(test);
    const RowMatrix proba = model.predict_proba(held);
    if (classes == 2) {
      std::vector<double> s(proba.rows());
      for (Eigen::Index r = 0; r < proba.rows(); ++r) s[static_cast<std::size_t>(r)] = proba(r, 1);
      scores[f] = auc_binary(s, held.labels());
    } else {
      scores[f] = auc_ovo(proba, held.labels());
    }
    } catch (...) {
#pragma omp critical(sepph_roc_auc_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  const double nn = static_cast<double>(n);
  const double mean = std::accumulate(scores.begin(), scores.end(), 0.0) / nn;
  double ss = 0.0;
  for (double s : scores) ss += (s - mean) * (s - mean);
  const double sem = std::sqrt(ss / (nn - 1.0)) / std::sqrt(nn);
  const boost::math::students_t dist(nn - 1.0);
  const double half = boost::math::quantile(boost::math::complement(dist, 0.025)) * sem;

  MetricReport rep;
  rep.name = "roc_auc_" + std::to_string(n);
  rep.value = mean;
  rep.ci_low = std::min(mean, mean - half);
  rep.ci_high = std::max(mean, mean + half);
  return rep;
}

std::vector<double> normalize_series(const std::vector<double>& values) {
  double top = 0.0;
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("series values must be finite and >= 0");
    top = std::max(top, v);
  }
  if (top <= 0.0) throw InvalidArgument("cannot normalize");
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i] == top ? 1.0 : values[i] / top;
  return out;
}

namespace {
std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t g = 0; g < order.size();) {
    std::size_t end = g;
    while (end < order.size() && v[order[end]] == v[order[g]]) ++end;
    const double r = 0.5 * static_cast<double>(g + end - 1) + 1.0;
    for (std::size_t t = g; t < end; ++t) rank[order[t]] = r;
    g = end;
  }
  return rank;
}
}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) throw InvalidArgument("spearman needs two equal-length series");
  const auto ra = average_ranks(a), rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace sepph
