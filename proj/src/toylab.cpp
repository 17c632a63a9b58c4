#include "sepph/toylab.hpp"

#include <cmath>
#include <exception>

#include "sepph/error.hpp"
#include "sepph/homology.hpp"
#include "sepph/learners.hpp"
#include "sepph/rng.hpp"

namespace sepph {

void ToyNetConfig::validate() const {
  if (input_dim < 1 || hidden1 < 1 || hidden2 < 1) throw InvalidArgument("toy network dimensions must be >= 1");
}

namespace {

void fill_uniform(double* data, Eigen::Index count, double bound, CounterRng& rng) {
  for (Eigen::Index i = 0; i < count; ++i) data[i] = rng.uniform(-bound, bound);
}

// Row-major fill so the draw order is independent of Eigen's storage order.
Eigen::MatrixXd uniform_matrix(std::size_t rows, std::size_t cols, CounterRng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(cols));
  RowMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  fill_uniform(m.data(), m.size(), bound, rng);
  return m;
}

Eigen::VectorXd uniform_vector(std::size_t size, std::size_t fan_in, CounterRng& rng) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(size));
  fill_uniform(v.data(), v.size(), 1.0 / std::sqrt(static_cast<double>(fan_in)), rng);
  return v;
}

Eigen::ArrayXXd relu_mask(const RowMatrix& a) { return (a.array() > 0.0).cast<double>(); }

// Intermediate values of one forward pass, kept for backpropagation.
struct Activations {
  RowMatrix a1, h1, a2, h2;
  RowMatrix xhat;            // LayerNorm only
  Eigen::VectorXd inv_std;   // LayerNorm only, per row
  RowMatrix embedding;
  RowMatrix proba;
};

Activations run_forward(const ToyNet& net, const RowMatrix& x) {
  if (static_cast<std::size_t>(x.cols()) != net.config.input_dim)
    throw InvalidArgument("input dimension does not match the network");
  Activations act;
  act.a1 = x * net.w1.transpose();
  act.a1.rowwise() += net.b1.transpose();
  act.h1 = act.a1.cwiseMax(0.0);
  act.a2 = act.h1 * net.w2.transpose();
  act.a2.rowwise() += net.b2.transpose();
  act.h2 = act.a2.cwiseMax(0.0);

  if (net.config.use_layer_norm) {
    const auto n = act.h2.rows();
    const auto d = static_cast<double>(act.h2.cols());
    act.xhat.resize(n, act.h2.cols());
    act.inv_std.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double mean = act.h2.row(i).sum() / d;
      const double var = (act.h2.row(i).array() - mean).square().sum() / d;
      act.inv_std(i) = 1.0 / std::sqrt(var + kLayerNormEps);
      act.xhat.row(i) = (act.h2.row(i).array() - mean) * act.inv_std(i);
    }
    act.embedding = act.xhat.array().rowwise() * net.ln_gain.transpose().array();
    act.embedding.rowwise() += net.ln_offset.transpose();
  } else {
    act.embedding = act.h2;
  }

  RowMatrix z = act.embedding * net.w3.transpose();
  z.rowwise() += net.b3.transpose();
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    z.row(i).array() -= z.row(i).maxCoeff();
    z.row(i) = z.row(i).array().exp();
    z.row(i) /= z.row(i).sum();
  }
  act.proba = std::move(z);
  return act;
}

void check_binary_labels(const PointCloud& pc, const char* what) {
  for (int l : pc.labels())
    if (l != 0 && l != 1) throw InvalidArgument(std::string(what) + " labels must be 0 or 1 for the two-class toy network");
}

}  // namespace

ToyNet ToyNet::init(const ToyNetConfig& cfg) {
  cfg.validate();
  CounterRng rng(cfg.seed);
  ToyNet net;
  net.config = cfg;
  net.w1 = uniform_matrix(cfg.hidden1, cfg.input_dim, rng);
  net.b1 = uniform_vector(cfg.hidden1, cfg.input_dim, rng);
  net.w2 = uniform_matrix(cfg.hidden2, cfg.hidden1, rng);
  net.b2 = uniform_vector(cfg.hidden2, cfg.hidden1, rng);
  net.w3 = uniform_matrix(2, cfg.hidden2, rng);
  net.b3 = uniform_vector(2, cfg.hidden2, rng);
  if (cfg.use_layer_norm) {
    net.ln_gain = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(cfg.hidden2));
    net.ln_offset = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cfg.hidden2));
  }
  return net;
}

ToyNet ToyNet::zeros_like(const ToyNet& net) {
  ToyNet z;
  z.config = net.config;
  z.w1 = Eigen::MatrixXd::Zero(net.w1.rows(), net.w1.cols());
  z.w2 = Eigen::MatrixXd::Zero(net.w2.rows(), net.w2.cols());
  z.w3 = Eigen::MatrixXd::Zero(net.w3.rows(), net.w3.cols());
  z.b1 = Eigen::VectorXd::Zero(net.b1.size());
  z.b2 = Eigen::VectorXd::Zero(net.b2.size());
  z.b3 = Eigen::VectorXd::Zero(net.b3.size());
  z.ln_gain = Eigen::VectorXd::Zero(net.ln_gain.size());
  z.ln_offset = Eigen::VectorXd::Zero(net.ln_offset.size());
  return z;
}

std::vector<std::span<double>> ToyNet::parameters() {
  auto view = [](auto& m) { return std::span<double>(m.data(), static_cast<std::size_t>(m.size())); };
  return {view(w1), view(b1), view(w2), view(b2), view(ln_gain), view(ln_offset), view(w3), view(b3)};
}

std::vector<std::span<const double>> ToyNet::parameters() const {
  auto view = [](const auto& m) { return std::span<const double>(m.data(), static_cast<std::size_t>(m.size())); };
  return {view(w1), view(b1), view(w2), view(b2), view(ln_gain), view(ln_offset), view(w3), view(b3)};
}

RowMatrix ToyNet::hidden(const RowMatrix& x) const { return run_forward(*this, x).embedding; }

RowMatrix ToyNet::forward(const RowMatrix& x) const { return run_forward(*this, x).proba; }

Eigen::VectorXd layer_norm(const Eigen::VectorXd& v, const Eigen::VectorXd& gain, const Eigen::VectorXd& offset,
                           double eps) {
  if (v.size() == 0 || gain.size() != v.size() || offset.size() != v.size())
    throw InvalidArgument("layer_norm dimensions must match");
  const double d = static_cast<double>(v.size());
  const double mean = v.sum() / d;
  const double var = (v.array() - mean).square().sum() / d;
  return ((v.array() - mean) / std::sqrt(var + eps) * gain.array() + offset.array()).matrix();
}

PointCloud encode(const ToyNet& net, const PointCloud& pc) {
  RowMatrix emb = net.hidden(pc.points());
  if (pc.has_labels()) return PointCloud(std::move(emb), pc.labels());
  return PointCloud(std::move(emb));
}

ToyGradient toy_loss_gradient(const ToyNet& net, const RowMatrix& x, std::span<const int> labels) {
  if (static_cast<std::size_t>(x.rows()) != labels.size()) throw InvalidArgument("inputs and labels differ in length");
  const Activations act = run_forward(net, x);
  const auto n = x.rows();

  ToyGradient out;
  out.grad = ToyNet::zeros_like(net);
  ToyNet& g = out.grad;

  RowMatrix dz = act.proba;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    out.loss -= std::log(act.proba(i, y));
    dz(i, y) -= 1.0;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  out.loss *= inv_n;
  dz *= inv_n;

  g.w3 = dz.transpose() * act.embedding;
  g.b3 = dz.colwise().sum().transpose();
  RowMatrix d_emb = dz * net.w3;

  RowMatrix dh2;
  if (net.config.use_layer_norm) {
    g.ln_gain = (d_emb.array() * act.xhat.array()).colwise().sum().transpose();
    g.ln_offset = d_emb.colwise().sum().transpose();
    const RowMatrix dxhat = d_emb.array().rowwise() * net.ln_gain.transpose().array();
    const double d = static_cast<double>(dxhat.cols());
    dh2.resize(n, dxhat.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
      const double mean_dx = dxhat.row(i).sum() / d;
      const double mean_dx_xhat = dxhat.row(i).dot(act.xhat.row(i)) / d;
      dh2.row(i) = act.inv_std(i) * (dxhat.row(i).array() - mean_dx - act.xhat.row(i).array() * mean_dx_xhat);
    }
  } else {
    dh2 = std::move(d_emb);
  }

  const RowMatrix da2 = dh2.array() * relu_mask(act.a2);
  g.w2 = da2.transpose() * act.h1;
  g.b2 = da2.colwise().sum().transpose();
  const RowMatrix da1 = (da2 * net.w2).array() * relu_mask(act.a1);
  g.w1 = da1.transpose() * x;
  g.b1 = da1.colwise().sum().transpose();
  return out;
}

Adam::Adam(const ToyNet& net, AdamConfig cfg)
    : cfg_(cfg), m_(ToyNet::zeros_like(net)), v_(ToyNet::zeros_like(net)) {}

void Adam::step(ToyNet& net, const ToyNet& grad) {
  ++t_;
  const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  auto params = net.parameters();
  const auto grads = grad.parameters();
  auto ms = m_.parameters();
  auto vs = v_.parameters();
  for (std::size_t p = 0; p < params.size(); ++p) {
    if (grads[p].size() != params[p].size()) throw InvalidArgument("gradient shape does not match parameters");
    for (std::size_t i = 0; i < params[p].size(); ++i) {
      const double gi = grads[p][i];
      ms[p][i] = cfg_.beta1 * ms[p][i] + (1.0 - cfg_.beta1) * gi;
      vs[p][i] = cfg_.beta2 * vs[p][i] + (1.0 - cfg_.beta2) * gi * gi;
      const double m_hat = ms[p][i] / c1;
      const double v_hat = vs[p][i] / c2;
      params[p][i] -= cfg_.lr * m_hat / (std::sqrt(v_hat) + cfg_.eps);
    }
  }
}

EmbeddingTrace train_toy(const ToyNetConfig& cfg, const PointCloud& train, const PointCloud& track,
                         std::size_t epochs, double lr) {
  cfg.validate();
  if (train.dim() != cfg.input_dim || track.dim() != cfg.input_dim)
    throw InvalidArgument("dataset dimension does not match the network input");
  check_binary_labels(train, "training");
  check_binary_labels(track, "tracking");

  ToyNet net = ToyNet::init(cfg);
  AdamConfig acfg;
  acfg.lr = lr;
  Adam adam(net, acfg);
  const auto& y = train.labels();

  EmbeddingTrace trace;
  auto record = [&](int epoch, double loss) {
    trace.epochs.push_back(epoch);
    const RowMatrix proba = net.forward(track.points());
    trace.embeddings.push_back(encode(net, track));
    trace.train_loss.push_back(loss);
    std::vector<double> s(static_cast<std::size_t>(proba.rows()));
    for (Eigen::Index r = 0; r < proba.rows(); ++r) s[static_cast<std::size_t>(r)] = proba(r, 1);
    trace.track_auc.push_back(auc_binary(s, track.labels()));
  };

  auto step = toy_loss_gradient(net, train.points(), y);
  record(0, step.loss);
  for (std::size_t e = 1; e <= epochs; ++e) {
    adam.step(net, step.grad);
    step = toy_loss_gradient(net, train.points(), y);
    record(static_cast<int>(e), step.loss);
  }
  trace.final_net = std::move(net);
  return trace;
}

SynthConfig toy_dataset_config(const ToyExperimentConfig& cfg, std::size_t dataset) {
  SynthConfig sc;
  sc.n_samples = cfg.samples;
  sc.n_features = cfg.features;
  sc.n_classes = 2;
  sc.class_sep = cfg.class_sep;
  sc.seed = derive_seed(cfg.seed, {dataset, 0});
  if (cfg.clusters_per_class > 0) {
    sc.clusters_per_class = cfg.clusters_per_class;
  } else {
    CounterRng rng(derive_seed(cfg.seed, {dataset, 1}));
    sc.clusters_per_class = 1 + static_cast<std::size_t>(rng.below(3));
  }
  return sc;
}

std::uint64_t toy_network_seed(const ToyExperimentConfig& cfg, std::size_t dataset) {
  return derive_seed(cfg.seed, {dataset, 2});
}

std::pair<PointCloud, PointCloud> split_halves(const PointCloud& pc) {
  const std::size_t half = pc.size() / 2;
  std::vector<std::size_t> first(half), second(pc.size() - half);
  for (std::size_t i = 0; i < half; ++i) first[i] = i;
  for (std::size_t i = half; i < pc.size(); ++i) second[i - half] = i;
  return {pc.subset(first), pc.subset(second)};
}

std::vector<ToyRunSummary> run_toy_experiment(const ToyExperimentConfig& cfg, const ToyRunSink& sink) {
  std::vector<bool> variants;
  if (cfg.run_plain) variants.push_back(false);
  if (cfg.run_layer_norm) variants.push_back(true);
  if (variants.empty()) throw InvalidArgument("no toy variant selected");
  if (cfg.samples < 4) throw InvalidArgument("toy experiment needs at least four samples");

  const std::size_t jobs = cfg.datasets * variants.size();
  std::vector<ToyRunSummary> out(jobs);
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t job = 0; job < jobs; ++job) {
    try {
      const std::size_t dataset = job / variants.size();
      ToyRunSummary& s = out[job];
      s.dataset = dataset;
      s.layer_norm = variants[job % variants.size()];
      const SynthConfig sc = toy_dataset_config(cfg, dataset);
      s.data_seed = sc.seed;
      s.clusters_per_class = sc.clusters_per_class;
      s.net_seed = toy_network_seed(cfg, dataset);

      const auto [train, track] = split_halves(make_classification(sc));
      ToyNetConfig nc;
      nc.input_dim = cfg.features;
      nc.use_layer_norm = s.layer_norm;
      nc.seed = s.net_seed;
      const EmbeddingTrace trace = train_toy(nc, train, track, cfg.epochs, cfg.lr);

      s.final_loss = trace.train_loss.back();
      s.final_auc = trace.track_auc.back();
      s.initial_persistences = normalized_h0(trace.embeddings.front()).values;
      s.final_persistences = normalized_h0(trace.embeddings.back()).values;
      if (sink) sink(s, trace);
    } catch (...) {
#pragma omp critical(sepph_toy_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace sepph
