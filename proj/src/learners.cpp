#include "sepph/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sepph/error.hpp"
#include "sepph/kernels.hpp"
#include "sepph/rng.hpp"

namespace sepph {

// ---------------------------------------------------------------- k-means

namespace {

RowMatrix kmeans_plus_plus(const RowMatrix& x, std::size_t k, CounterRng& rng) {
  const auto n = static_cast<std::size_t>(x.rows());
  const Eigen::Index d = x.cols();
  RowMatrix centroids(static_cast<Eigen::Index>(k), d);
  std::vector<bool> chosen(n, false);

  std::size_t first = static_cast<std::size_t>(rng.below(n));
  centroids.row(0) = x.row(static_cast<Eigen::Index>(first));
  chosen[first] = true;

  std::vector<double> closest(n);
  for (std::size_t i = 0; i < n; ++i)
    closest[i] = kernels::squared_euclidean(x.data() + i * d, centroids.data(), d);

  for (std::size_t c = 1; c < k; ++c) {
    const double total = std::accumulate(closest.begin(), closest.end(), 0.0);
    std::size_t pick = n;
    if (total > 0.0) {
      const double r = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += closest[i];
        if (closest[i] > 0.0 && r < acc) {
          pick = i;
          break;
        }
      }
      if (pick == n)  // r landed on the rounding tail; take the last positive weight
        for (std::size_t i = n; i-- > 0;)
          if (closest[i] > 0.0) {
            pick = i;
            break;
          }
    } else {
      // Every remaining point coincides with a centroid.
      pick = static_cast<std::size_t>(std::find(chosen.begin(), chosen.end(), false) - chosen.begin());
    }
    chosen[pick] = true;
    centroids.row(static_cast<Eigen::Index>(c)) = x.row(static_cast<Eigen::Index>(pick));
    for (std::size_t i = 0; i < n; ++i)
      closest[i] = std::min(closest[i], kernels::squared_euclidean(x.data() + i * d,
                                                                   centroids.data() + c * d, d));
  }
  return centroids;
}

void reseed_empty_clusters(const RowMatrix& x, RowMatrix& centroids, std::vector<int>& assign,
                           std::vector<double>& sq_dist) {
  const auto k = static_cast<std::size_t>(centroids.rows());
  std::vector<std::size_t> counts(k, 0);
  for (int a : assign) ++counts[static_cast<std::size_t>(a)];
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] > 0) continue;
    std::size_t far = assign.size();
    for (std::size_t i = 0; i < assign.size(); ++i) {
      if (counts[static_cast<std::size_t>(assign[i])] < 2) continue;
      if (far == assign.size() || sq_dist[i] > sq_dist[far]) far = i;
    }
    if (far == assign.size()) break;  // k > number of movable points; cannot happen for k <= N
    --counts[static_cast<std::size_t>(assign[far])];
    ++counts[c];
    assign[far] = static_cast<int>(c);
    sq_dist[far] = 0.0;
    centroids.row(static_cast<Eigen::Index>(c)) = x.row(static_cast<Eigen::Index>(far));
  }
}

RowMatrix cluster_means(const RowMatrix& x, const std::vector<int>& assign, const RowMatrix& previous) {
  RowMatrix sums = RowMatrix::Zero(previous.rows(), previous.cols());
  std::vector<std::size_t> counts(static_cast<std::size_t>(previous.rows()), 0);
  for (std::size_t i = 0; i < assign.size(); ++i) {
    sums.row(assign[i]) += x.row(static_cast<Eigen::Index>(i));
    ++counts[static_cast<std::size_t>(assign[i])];
  }
  for (Eigen::Index c = 0; c < sums.rows(); ++c) {
    if (counts[static_cast<std::size_t>(c)] == 0)
      sums.row(c) = previous.row(c);
    else
      sums.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
  }
  return sums;
}

}  // namespace

KMeansResult kmeans(const PointCloud& pc, std::size_t k, std::uint64_t seed) {
  const std::size_t n = pc.size();
  if (n == 0) throw InvalidArgument("empty input");
  if (k < 1 || k > n) throw InvalidArgument("k-means requires 1 <= k <= N");

  const RowMatrix& x = pc.points();
  CounterRng rng(seed);
  KMeansResult res;
  res.centroids = kmeans_plus_plus(x, k, rng);

  std::vector<int> assign(n, -1), previous;
  std::vector<double> sq_dist(n);
  for (std::size_t it = 0; it < kKMeansMaxIterations; ++it) {
    kernels::assign_to_centroids(x, res.centroids, assign, sq_dist);
    reseed_empty_clusters(x, res.centroids, assign, sq_dist);
    res.inertia_trace.push_back(std::accumulate(sq_dist.begin(), sq_dist.end(), 0.0));
    res.iterations = it + 1;
    if (assign == previous) break;
    previous = assign;
    res.centroids = cluster_means(x, assign, res.centroids);
  }

  const Eigen::Index d = x.cols();
  res.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    res.inertia += kernels::squared_euclidean(x.data() + i * d, res.centroids.data() + assign[i] * d, d);
  res.assignments = std::move(assign);
  return res;
}

// ---------------------------------------------------------------- neighbors

std::vector<std::size_t> knn_indices(const DistanceMatrix& dm, std::size_t i, std::size_t k) {
  const std::size_t n = dm.size();
  if (i >= n) throw InvalidArgument("point index out of range");
  if (k < 1 || k > n - 1) throw InvalidArgument("k out of range");
  std::vector<std::size_t> order;
  order.reserve(n - 1);
  for (std::size_t j = 0; j < n; ++j)
    if (j != i) order.push_back(j);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      const double da = dm(i, a), db = dm(i, b);
                      return da != db ? da < db : a < b;
                    });
  order.resize(k);
  return order;
}

// ---------------------------------------------------------------- softmax

Standardizer Standardizer::fit(const RowMatrix& x) {
  Standardizer s;
  const auto n = static_cast<double>(x.rows());
  s.mean = x.colwise().mean();
  s.scale.resize(x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double var = (x.col(c).array() - s.mean(c)).square().sum() / n;
    s.scale(c) = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  return s;
}

RowMatrix Standardizer::apply(const RowMatrix& x) const {
  RowMatrix out = x.rowwise() - mean;
  out.array().rowwise() /= scale.array();
  return out;
}

RowMatrix softmax_probabilities(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias,
                                const RowMatrix& x) {
  RowMatrix z = x * weights.transpose();
  z.rowwise() += bias.transpose();
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    z.row(i).array() -= z.row(i).maxCoeff();
    z.row(i) = z.row(i).array().exp();
    z.row(i) /= z.row(i).sum();
  }
  return z;
}

SoftmaxGradient softmax_loss_gradient(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias,
                                      const RowMatrix& x, std::span<const int> labels) {
  const auto n = x.rows();
  RowMatrix p = softmax_probabilities(weights, bias, x);
  SoftmaxGradient g;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    g.loss -= std::log(p(i, y));
    p(i, y) -= 1.0;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  g.loss *= inv_n;
  p *= inv_n;  // dL/dz
  g.d_weights = p.transpose() * x;
  g.d_bias = p.colwise().sum().transpose();
  return g;
}

SoftmaxModel softmax_fit(const PointCloud& pc, const FitConfig& cfg) {
  const auto& labels = pc.labels();
  const int classes = cfg.classes > 0 ? cfg.classes : pc.num_classes();
  {
    std::vector<int> distinct(labels.begin(), labels.end());
    std::sort(distinct.begin(), distinct.end());
    if (std::unique(distinct.begin(), distinct.end()) - distinct.begin() < 2)
      throw InvalidArgument("degenerate labels");
  }
  if (pc.num_classes() > classes) throw InvalidArgument("label exceeds class count");

  SoftmaxModel m;
  m.classes = classes;
  m.standardizer = Standardizer::fit(pc.points());
  const RowMatrix x = m.standardizer.apply(pc.points());
  m.weights = Eigen::MatrixXd::Zero(classes, x.cols());
  m.bias = Eigen::VectorXd::Zero(classes);

  const std::size_t n = pc.size();
  if (cfg.batch_size == 0 || cfg.batch_size >= n) {
    for (std::size_t e = 0; e < cfg.epochs; ++e) {
      const auto g = softmax_loss_gradient(m.weights, m.bias, x, labels);
      m.loss_history.push_back(g.loss);
      m.weights -= cfg.lr * g.d_weights;
      m.bias -= cfg.lr * g.d_bias;
    }
  } else {
    CounterRng rng(cfg.seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<int> batch_labels;
    for (std::size_t e = 0; e < cfg.epochs; ++e) {
      m.loss_history.push_back(softmax_loss_gradient(m.weights, m.bias, x, labels).loss);
      rng.shuffle(order);
      for (std::size_t start = 0; start < n; start += cfg.batch_size) {
        const std::size_t stop = std::min(n, start + cfg.batch_size);
        RowMatrix xb(static_cast<Eigen::Index>(stop - start), x.cols());
        batch_labels.clear();
        for (std::size_t r = start; r < stop; ++r) {
          xb.row(static_cast<Eigen::Index>(r - start)) = x.row(static_cast<Eigen::Index>(order[r]));
          batch_labels.push_back(labels[order[r]]);
        }
        const auto g = softmax_loss_gradient(m.weights, m.bias, xb, batch_labels);
        m.weights -= cfg.lr * g.d_weights;
        m.bias -= cfg.lr * g.d_bias;
      }
    }
  }
  m.loss_history.push_back(softmax_loss_gradient(m.weights, m.bias, x, labels).loss);
  return m;
}

SoftmaxModel softmax_fit(const PointCloud& pc, double lr, std::size_t epochs, std::uint64_t seed) {
  FitConfig cfg;
  cfg.lr = lr;
  cfg.epochs = epochs;
  cfg.seed = seed;
  return softmax_fit(pc, cfg);
}

RowMatrix SoftmaxModel::predict_proba(const PointCloud& pc) const {
  if (pc.dim() != static_cast<std::size_t>(weights.cols()))
    throw InvalidArgument("feature dimension does not match the model");
  return softmax_probabilities(weights, bias, standardizer.apply(pc.points()));
}

// ---------------------------------------------------------------- AUC

double auc_binary(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw InvalidArgument("scores and labels differ in length");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (std::isnan(scores[i])) throw InvalidArgument("NaN score");
    if (labels[i] != 0 && labels[i] != 1) throw InvalidArgument("binary labels must be 0 or 1");
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // 2U counted exactly in integers: each positive earns 2 per lower negative
  // and 1 per tied negative.
  std::uint64_t twice_u = 0, neg_below = 0, pos = 0, neg = 0;
  for (std::size_t g = 0; g < order.size();) {
    std::size_t end = g;
    std::uint64_t pos_here = 0, neg_here = 0;
    while (end < order.size() && scores[order[end]] == scores[order[g]]) {
      (labels[order[end]] == 1 ? pos_here : neg_here) += 1;
      ++end;
    }
    twice_u += pos_here * (2 * neg_below + neg_here);
    neg_below += neg_here;
    pos += pos_here;
    neg += neg_here;
    g = end;
  }
  if (pos == 0 || neg == 0) throw InvalidArgument("AUC needs both classes present");
  return static_cast<double>(twice_u) / static_cast<double>(2 * pos * neg);
}

double auc_ovo(const RowMatrix& probabilities, std::span<const int> labels) {
  const auto classes = static_cast<int>(probabilities.cols());
  if (classes < 2) throw InvalidArgument("one-vs-one AUC needs at least two classes");
  if (static_cast<std::size_t>(probabilities.rows()) != labels.size())
    throw InvalidArgument("probabilities and labels differ in length");
  std::vector<std::size_t> counts(static_cast<std::size_t>(classes), 0);
  for (int l : labels) {
    if (l < 0 || l >= classes) throw InvalidArgument("label outside probability columns");
    ++counts[static_cast<std::size_t>(l)];
  }
  if (std::find(counts.begin(), counts.end(), 0) != counts.end())
    throw InvalidArgument("every class must be present for one-vs-one AUC");

  double total = 0.0;
  std::size_t pairs = 0;
  std::vector<double> si, sj;
  std::vector<int> yi, yj;
  for (int a = 0; a < classes; ++a) {
    for (int b = a + 1; b < classes; ++b) {
      si.clear(); sj.clear(); yi.clear(); yj.clear();
      for (std::size_t r = 0; r < labels.size(); ++r) {
        if (labels[r] != a && labels[r] != b) continue;
        const auto row = static_cast<Eigen::Index>(r);
        si.push_back(probabilities(row, a));
        yi.push_back(labels[r] == a ? 1 : 0);
        sj.push_back(probabilities(row, b));
        yj.push_back(labels[r] == b ? 1 : 0);
      }
      total += 0.5 * (auc_binary(si, yi) + auc_binary(sj, yj));
      ++pairs;
    }
  }
  return total / static_cast<double>(pairs);
}

}  // namespace sepph
