// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if
// all pass. `--datasets N` shrinks the toy sweep of criterion 3 (min 5).

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "sepph/homology.hpp"
#include "sepph/learners.hpp"
#include "sepph/metrics.hpp"
#include "sepph/summaries.hpp"
#include "sepph/synth.hpp"
#include "sepph/toylab.hpp"
#include "test_util.hpp"

using namespace sepph;
namespace fs = std::filesystem;
using sepph::testing::random_cloud;
using sepph::testing::run_cli;
using sepph::testing::slurp;
using sepph::testing::TempDir;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// ---------------------------------------------------------------- 1

Outcome engine_equivalence() {
  CounterRng rng(20240601);
  double worst = 0.0;
  std::size_t mismatched = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(31);
    const std::size_t d = 1 + rng.below(8);
    const auto dm = pairwise_distances(random_cloud(n, d, rng.next_u64()));
    const auto a = sorted(h0_persistence(dm).deaths());
    const auto b = sorted(h0_persistence_oracle(dm).deaths());
    if (a.size() != b.size()) {
      ++mismatched;
      continue;
    }
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return {mismatched == 0 && worst <= 1e-9, fmt("200 clouds, max |diff| %.3g, size mismatches %zu", worst, mismatched)};
}

// ---------------------------------------------------------------- 2

Outcome structural_invariants() {
  // Scaling by 0.01 or 100 is not exact in binary floating point; the
  // normalized values may move by a few ulp of 1.
  const double scale_tol = 16 * std::numeric_limits<double>::epsilon();
  CounterRng rng(99);
  std::size_t violations = 0;
  double worst_scale = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(64);
    const std::size_t d = 1 + rng.below(8);
    const auto pc = random_cloud(n, d, rng.next_u64());
    const auto pd = h0_persistence(pairwise_distances(pc));
    if (pd.finite_bars.size() != n - 1 || !pd.has_infinite_bar) ++violations;
    for (const auto& b : pd.finite_bars)
      if (b.birth != 0.0) ++violations;
    if (n < 2) continue;
    const auto np = normalize_diagram(pd).values;
    const double top = *std::max_element(np.begin(), np.end());
    for (double v : np)
      if (v < 0.0 || v > 1.0) ++violations;
    if (top != 1.0 && top != 0.0) ++violations;
    for (double c : {0.01, 1.0, 100.0}) {
      const auto scaled = normalized_h0(pc.scaled(c)).values;
      for (std::size_t i = 0; i < np.size(); ++i) worst_scale = std::max(worst_scale, std::abs(scaled[i] - np[i]));
    }
  }
  return {violations == 0 && worst_scale <= scale_tol,
          fmt("1000 clouds, violations %zu, max scale deviation %.3g (bound %.3g)", violations, worst_scale,
              scale_tol)};
}

// ---------------------------------------------------------------- 3

Outcome toy_direction(std::size_t datasets) {
  ToyExperimentConfig cfg;
  cfg.datasets = datasets;
  cfg.epochs = 100;
  const auto runs = run_toy_experiment(cfg);
  std::vector<double> pooled[2], run_medians[2];
  double auc[2] = {0, 0};
  for (const auto& r : runs) {
    const int v = r.layer_norm ? 1 : 0;
    pooled[v].insert(pooled[v].end(), r.final_persistences.begin(), r.final_persistences.end());
    run_medians[v].push_back(median(r.final_persistences));
    auc[v] += r.final_auc;
  }
  const double n = static_cast<double>(datasets);
  const double med_plain = median(pooled[0]), med_ln = median(pooled[1]);
  const double auc_plain = auc[0] / n, auc_ln = auc[1] / n;
  std::size_t ln_lower = 0;
  for (std::size_t i = 0; i < datasets; ++i) ln_lower += run_medians[1][i] < run_medians[0][i] ? 1 : 0;
  const bool direction = med_ln < med_plain;
  const bool auc_ok = auc_plain >= 0.90 && auc_ln >= 0.90;
  return {direction && (datasets < 20 || auc_ok),
          fmt("%zu datasets, median final persistence LN %.4f vs plain %.4f (LN lower in %zu/%zu runs), "
              "mean AUC plain %.3f LN %.3f%s",
              datasets, med_ln, med_plain, ln_lower, datasets, auc_plain, auc_ln,
              datasets < 20 ? " (AUC not gated below 20 datasets)" : "")};
}

// ---------------------------------------------------------------- 4

Outcome density_convergence() {
  ToyExperimentConfig cfg;
  cfg.datasets = 1;
  cfg.epochs = 100;
  cfg.class_sep = 0.3;
  cfg.clusters_per_class = 1;
  cfg.run_plain = false;
  std::vector<double> dist;
  double final_auc = 0.0;
  run_toy_experiment(cfg, [&](const ToyRunSummary& s, const EmbeddingTrace& trace) {
    NormalizedPersistences prev = normalized_h0(trace.embeddings[0]);
    for (std::size_t e = 1; e < trace.embeddings.size(); ++e) {
      NormalizedPersistences cur = normalized_h0(trace.embeddings[e]);
      dist.push_back(density_distance(prev, cur));
      prev = std::move(cur);
    }
    final_auc = s.final_auc;
  });
  // dist[e - 1] is the change from epoch e - 1 to epoch e.
  const auto mean = [&](std::size_t lo, std::size_t hi) {
    return std::accumulate(dist.begin() + static_cast<long>(lo - 1), dist.begin() + static_cast<long>(hi), 0.0) /
           static_cast<double>(hi - lo + 1);
  };
  const double early = mean(1, 30), late = mean(41, 100);
  return {late < early, fmt("mean density distance epochs 41-100 %.5f vs 1-30 %.5f (final AUC %.3f)", late, early,
                            final_auc)};
}

// ---------------------------------------------------------------- 5

struct SweepPoint {
  double p_lt_t = 0.0, thornton = 0.0, roc_auc = 0.0;
};

constexpr std::size_t kSweepReplicates = 5;

// One toy experiment per class_sep with the same base seed, so replicate r
// uses the same data and network seeds at every separation. Metrics of the
// final tracking-set embeddings are averaged over the replicates.
std::vector<SweepPoint> trained_sweep(const std::vector<double>& seps, bool layer_norm) {
  std::vector<SweepPoint> out;
  for (double sep : seps) {
    ToyExperimentConfig cfg;
    cfg.datasets = kSweepReplicates;
    cfg.epochs = 100;
    cfg.class_sep = sep;
    cfg.clusters_per_class = 1;
    cfg.run_plain = !layer_norm;
    cfg.run_layer_norm = layer_norm;
    std::vector<SweepPoint> reps(kSweepReplicates);
    run_toy_experiment(cfg, [&](const ToyRunSummary& s, const EmbeddingTrace& t) {
      const auto& e = t.embeddings.back();
      reps[s.dataset] = {persistence_statistic(normalized_h0(e), 0.6), thornton_index(e), roc_auc_n(e, 5, 0).value};
    });
    SweepPoint mean;
    for (const auto& r : reps) {
      mean.p_lt_t += r.p_lt_t / kSweepReplicates;
      mean.thornton += r.thornton / kSweepReplicates;
      mean.roc_auc += r.roc_auc / kSweepReplicates;
    }
    out.push_back(mean);
  }
  return out;
}

Outcome metric_consistency() {
  const std::vector<double> seps{0.1, 0.3, 0.5, 1.0, 2.0, 4.0};
  std::string detail;
  bool pass = true;
  for (bool ln : {false, true}) {
    const auto pts = trained_sweep(seps, ln);
    std::vector<double> p, th, roc;
    for (const auto& s : pts) {
      p.push_back(s.p_lt_t);
      th.push_back(s.thornton);
      roc.push_back(s.roc_auc);
    }
    const double rt = spearman(p, th), rr = spearman(p, roc);
    pass = pass && rt >= 0.8 && rr >= 0.8;
    detail += fmt("%s rho(P,Thornton) %.3f rho(P,ROC-AUC-5) %.3f; ", ln ? "LN" : "plain", rt, rr);
  }
  detail += fmt("trained embeddings, %zu replicates per class_sep, seed 0", kSweepReplicates);
  return {pass, detail};
}

// Same sweep on the raw generator output, reported for reference only.
std::string raw_sweep_note() {
  const std::vector<double> seps{0.1, 0.3, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> p, th, roc;
  for (double sep : seps) {
    SynthConfig cfg;
    cfg.n_samples = 1000;
    cfg.class_sep = sep;
    const auto pc = make_classification(cfg);
    p.push_back(persistence_statistic(normalized_h0(pc), 0.6));
    th.push_back(thornton_index(pc));
    roc.push_back(roc_auc_n(pc, 5, 0).value);
  }
  return fmt("raw 40-d generator output: rho(P,Thornton) %.3f rho(P,ROC-AUC-5) %.3f", spearman(p, th),
             spearman(p, roc));
}

// ---------------------------------------------------------------- 6

double brute_auc(const std::vector<double>& s, const std::vector<int>& y) {
  long long twice = 0, pairs = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      if (y[i] == 1 && y[j] == 0) {
        ++pairs;
        twice += s[i] > s[j] ? 2 : (s[i] == s[j] ? 1 : 0);
      }
  return static_cast<double>(twice) / static_cast<double>(2 * pairs);
}

double brute_thornton(const PointCloud& pc, std::size_t k) {
  const auto& x = pc.points();
  const auto& y = pc.labels();
  std::size_t agree = 0;
  for (std::size_t i = 0; i < pc.size(); ++i) {
    std::vector<std::pair<double, std::size_t>> d;
    for (std::size_t j = 0; j < pc.size(); ++j)
      if (j != i) d.emplace_back((x.row(i) - x.row(j)).norm(), j);
    std::sort(d.begin(), d.end());
    for (std::size_t m = 0; m < k; ++m) agree += y[i] == y[d[m].second] ? 1 : 0;
  }
  return static_cast<double>(agree) / static_cast<double>(pc.size() * k);
}

double softmax_fd_error(std::uint64_t seed) {
  const auto pc = random_cloud(40, 4, seed, 3);
  const RowMatrix x = Standardizer::fit(pc.points()).apply(pc.points());
  CounterRng rng(seed);
  Eigen::MatrixXd w(3, 4);
  Eigen::VectorXd b(3);
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = rng.normal();
  for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = rng.normal();
  const auto g = softmax_loss_gradient(w, b, x, pc.labels());
  const double h = 1e-5;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    Eigen::MatrixXd wp = w, wm = w;
    wp.data()[i] += h;
    wm.data()[i] -= h;
    const double fd = (softmax_loss_gradient(wp, b, x, pc.labels()).loss -
                       softmax_loss_gradient(wm, b, x, pc.labels()).loss) / (2 * h);
    worst = std::max(worst, std::abs(fd - g.d_weights.data()[i]));
  }
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    Eigen::VectorXd bp = b, bm = b;
    bp[i] += h;
    bm[i] -= h;
    const double fd = (softmax_loss_gradient(w, bp, x, pc.labels()).loss -
                       softmax_loss_gradient(w, bm, x, pc.labels()).loss) / (2 * h);
    worst = std::max(worst, std::abs(fd - g.d_bias[i]));
  }
  return worst;
}

double toy_fd_error(bool layer_norm, std::uint64_t seed) {
  ToyNetConfig cfg;
  cfg.use_layer_norm = layer_norm;
  cfg.seed = seed;
  ToyNet net = ToyNet::init(cfg);
  const auto pc = random_cloud(5, cfg.input_dim, seed + 1, 2);
  const auto g = toy_loss_gradient(net, pc.points(), pc.labels());
  auto params = net.parameters();
  const auto grads = g.grad.parameters();
  // LayerNorm rows with small spread are strongly curved; the central
  // difference error is O(h^2) there and reaches ~1e-5 at h = 1e-5.
  const double h = 1e-6;
  double worst = 0.0;
  for (std::size_t p = 0; p < params.size(); ++p) {
    for (std::size_t i = 0; i < params[p].size(); ++i) {
      const double keep = params[p][i];
      params[p][i] = keep + h;
      const double up = toy_loss_gradient(net, pc.points(), pc.labels()).loss;
      params[p][i] = keep - h;
      const double down = toy_loss_gradient(net, pc.points(), pc.labels()).loss;
      params[p][i] = keep;
      worst = std::max(worst, std::abs((up - down) / (2 * h) - grads[p][i]));
    }
  }
  return worst;
}

Outcome estimator_oracles() {
  std::size_t auc_bad = 0, thornton_bad = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CounterRng rng(seed);
    const std::size_t n = 2 + rng.below(200);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = std::floor(rng.uniform() * 20);  // ties
      y[i] = static_cast<int>(rng.below(2));
    }
    y[0] = 0;
    y[1] = 1;
    if (auc_binary(s, y) != brute_auc(s, y)) ++auc_bad;

    const auto pc = random_cloud(10 + rng.below(90), 1 + rng.below(6), rng.next_u64(), 2 + static_cast<int>(seed % 3));
    const std::size_t k = 1 + rng.below(std::min<std::size_t>(pc.size() - 1, 10));
    if (std::abs(thornton_index(pc, k) - brute_thornton(pc, k)) > 1e-12) ++thornton_bad;
  }
  const auto ch = calinski_harabasz(testing::cloud({{0, 0}, {0, 1}, {10, 0}, {10, 1}}), 2, 0);
  const double ch_err = ch.infinite ? INFINITY : std::abs(ch.value - 200.0);
  double sm = 0.0, toy = 0.0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    sm = std::max(sm, softmax_fd_error(seed));
    toy = std::max({toy, toy_fd_error(false, seed), toy_fd_error(true, seed)});
  }
  const bool pass = auc_bad == 0 && thornton_bad == 0 && ch_err <= 1e-9 && sm <= 1e-5 && toy <= 1e-5;
  return {pass, fmt("AUC mismatches %zu/100, Thornton mismatches %zu/100, |CH-200| %.3g, "
                    "softmax FD %.3g, toy-net FD %.3g",
                    auc_bad, thornton_bad, ch_err, sm, toy)};
}

// ---------------------------------------------------------------- 7

// Runs every data-producing command in `dir` and returns the stdout of the
// commands whose output carries no paths.
std::vector<std::string> run_all_commands(const fs::path& dir) {
  const auto p = [&](const char* leaf) { return (dir / leaf).string(); };
  std::vector<std::string> stdouts;
  const auto must = [&](std::vector<std::string> args, bool keep) {
    const auto r = run_cli(std::move(args));
    if (r.code != 0) throw std::runtime_error("command failed: " + r.err);
    if (keep) stdouts.push_back(r.out);
  };
  must({"gen", "--n", "500", "--d", "8", "--classes", "3", "--class-sep", "0.7", "--seed", "11", "--out", p("data.csv")},
       false);
  must({"h0", p("data.csv"), "--values", "--seed", "11"}, true);
  must({"separability", p("data.csv"), "--seed", "11"}, true);
  must({"toy", "--datasets", "2", "--epochs", "12", "--samples", "200", "--seed", "11", "--snapshot-stride", "3",
        "--out-dir", p("toy")},
       false);
  must({"track", p("toy/runs/layernorm_001/manifest.json"), "--plot", "--seed", "11"}, false);
  return stdouts;
}

Outcome determinism() {
  TempDir a("acc_a"), b("acc_b");
  const auto out_a = run_all_commands(a.path());
  const auto out_b = run_all_commands(b.path());
  std::size_t files = 0, differing = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a.path())) {
    if (!entry.is_regular_file() || entry.path().extension() == ".svg") continue;
    const auto rel = fs::relative(entry.path(), a.path());
    ++files;
    if (!fs::exists(b.path() / rel) || slurp(entry.path()) != slurp(b.path() / rel)) ++differing;
  }
  const bool same_stdout = out_a == out_b;
  return {differing == 0 && same_stdout && files > 0,
          fmt("%zu data files compared, %zu differ, report stdout %s", files, differing,
              same_stdout ? "identical" : "differs")};
}

// ---------------------------------------------------------------- 8

Outcome golden_track() {
  const fs::path data = SEPPH_TEST_DATA;
  TempDir dir("acc_golden");
  const auto r = run_cli({"track", (data / "toy_trace" / "manifest.json").string(), "--out",
                          (dir / "report.json").string()});
  if (r.code != 0) return {false, "track failed: " + r.err};
  const auto got = slurp(dir / "report.json");
  const auto want = slurp(data / "toy_trace" / "run_report.golden.json");
  const auto j = nlohmann::json::parse(got);
  const bool converged = j["convergence_epoch"].is_number_integer() && j["convergence_epoch"].get<int>() >= 1;
  return {got == want && converged,
          fmt("committed toy trace: report %s golden, convergence_epoch %s", got == want ? "matches" : "differs from",
              j["convergence_epoch"].dump().c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::size_t datasets = 20;
  app.add_option("--datasets", datasets, "Toy datasets for criterion 3")->check(CLI::Range(5, 1000));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 engine equivalence", engine_equivalence},
      {"AC2 structural invariants", structural_invariants},
      {"AC3 toy LayerNorm direction", [&] { return toy_direction(datasets); }},
      {"AC4 density convergence", density_convergence},
      {"AC5 metric consistency", metric_consistency},
      {"AC6 estimator oracles", estimator_oracles},
      {"AC7 determinism", determinism},
      {"AC8 golden track report", golden_track},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  %-30s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("note  %-30s %s\n", "AC5 reference", raw_sweep_note().c_str());
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
