#include "cli/commands.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "cli/svg.hpp"
#include "sepph/error.hpp"
#include "sepph/homology.hpp"
#include "sepph/snapshot.hpp"

namespace sepph::cli {

namespace {

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}


PointCloud load_labelled(const fs::path& snapshot, const std::optional<fs::path>& labels) {
  PointCloud pc = read_snapshot(snapshot);
  if (labels) {
    auto l = read_labels(*labels);
    if (l.size() != pc.size())
      throw ShapeMismatch("label file has " + std::to_string(l.size()) + " labels for " + std::to_string(pc.size()) +
                          " points");
    pc = pc.with_labels(std::move(l));
  }
  return pc;
}

}  // namespace

// ---------------------------------------------------------------- gen

Json dataset_digest(const PointCloud& pc) {
  Json j;
  j["n"] = pc.size();
  j["d"] = pc.dim();
  j["classes"] = pc.num_classes();
  std::vector<std::size_t> counts(static_cast<std::size_t>(pc.num_classes()), 0);
  if (pc.has_labels())
    for (int l : pc.labels()) ++counts[static_cast<std::size_t>(l)];
  j["class_counts"] = counts;
  return j;
}

Json cmd_gen(const GenOptions& opt) {
  const PointCloud pc = make_classification(opt.synth);
  write_snapshot(opt.out, pc);
  Json j;
  j["schema"] = kReportSchema;
  j["seed"] = opt.synth.seed;
  j["path"] = opt.out.string();
  j.update(dataset_digest(pc));
  return j;
}

// ---------------------------------------------------------------- h0

Json h0_report(const PointCloud& pc, const H0Options& opt) {
  const auto np = normalized_h0(pc);
  Json j;
  j["schema"] = kReportSchema;
  j["seed"] = opt.seed;
  j["n_points"] = pc.size();
  j["n_bars"] = np.values.size();
  j["t"] = opt.t;
  j["p_lt_t"] = persistence_statistic(np, opt.t);
  j["histogram"] = to_json(persistence_density(np, opt.bins));
  if (opt.include_values) j["normalized_persistences"] = np.values;
  return j;
}

Json cmd_h0(const H0Options& opt) { return h0_report(read_snapshot(opt.snapshot), opt); }

// ---------------------------------------------------------------- separability

Json separability_report(const PointCloud& pc, const SeparabilityOptions& opt) {
  const MetricSelection sel = opt.selection.resolve(pc.has_labels());
  const EpochRecord rec = summarize_snapshot(pc, 0, opt.settings, sel);

  Json j;
  j["schema"] = kReportSchema;
  j["seed"] = opt.settings.seed;
  j["n_points"] = pc.size();
  j["labelled"] = pc.has_labels();
  j["config"] = Json{{"t", opt.settings.t},
                     {"bins", opt.settings.bins},
                     {"k", opt.settings.k},
                     {"clusters", opt.settings.clusters},
                     {"splits", opt.settings.splits},
                     {"fit_lr", opt.settings.fit.lr},
                     {"fit_epochs", opt.settings.fit.epochs}};
  j["metrics"] = Json::array();
  j["metrics"].push_back(to_json(MetricReport{"p_lt_t", rec.p_lt_t, std::nullopt, std::nullopt, std::nullopt}));
  if (rec.thornton)
    j["metrics"].push_back(to_json(MetricReport{"thornton", *rec.thornton, std::nullopt, std::nullopt, std::nullopt}));
  if (rec.ch) {
    Json ch{{"name", "calinski_harabasz"}, {"value", rec.ch->infinite ? Json(nullptr) : Json(rec.ch->value)},
            {"infinite", rec.ch->infinite}};
    j["metrics"].push_back(std::move(ch));
  }
  if (rec.roc_auc) {
    MetricReport m = *rec.roc_auc;
    m.epoch.reset();
    j["metrics"].push_back(to_json(m));
  }
  return j;
}

Json cmd_separability(const SeparabilityOptions& opt) {
  return separability_report(load_labelled(opt.snapshot, opt.labels), opt);
}

// ---------------------------------------------------------------- track

namespace {

void write_track_plots(const RunReport& r, const fs::path& stem, std::vector<fs::path>& artifacts) {
  std::vector<double> epochs;
  for (const auto& rec : r.records) epochs.push_back(rec.epoch);

  // Normalized metric curves.
  {
    const fs::path csv = stem.string() + "_metrics.csv";
    auto out = open_output(csv);
    out << "epoch";
    for (const auto& [name, _] : r.normalized) out << ',' << name;
    out << '\n';
    for (std::size_t e = 0; e < r.records.size(); ++e) {
      out << r.records[e].epoch;
      for (const auto& [_, series] : r.normalized)
        out << ',' << (series ? format_real((*series)[e]) : std::string());
      out << '\n';
    }
    artifacts.push_back(csv);

    SvgChart chart{"Normalized separability metrics", "epoch", "value / max over run", {}, true};
    const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    std::size_t c = 0;
    for (const auto& [name, series] : r.normalized) {
      if (!series) continue;
      SvgSeries s{name, epochs, {}, palette[c++ % 5]};
      for (double v : *series) s.y.emplace_back(v);
      chart.series.push_back(std::move(s));
    }
    const fs::path svg = stem.string() + "_metrics.svg";
    write_svg(svg, chart);
    artifacts.push_back(svg);
  }

  // Smoothed persistence-time densities, one curve per epoch.
  {
    std::vector<double> grid(101);
    for (std::size_t g = 0; g < grid.size(); ++g) grid[g] = static_cast<double>(g) / 100.0;
    std::vector<std::vector<double>> curves;
    for (const auto& np : r.persistences) curves.push_back(smoothed_density(np, grid));

    const fs::path csv = stem.string() + "_densities.csv";
    auto out = open_output(csv);
    out << "x";
    for (const auto& rec : r.records) out << ",epoch_" << rec.epoch;
    out << '\n';
    for (std::size_t g = 0; g < grid.size(); ++g) {
      out << format_real(grid[g]);
      for (const auto& c : curves) out << ',' << format_real(c[g]);
      out << '\n';
    }
    artifacts.push_back(csv);

    SvgChart chart{"Density of normalized H0 persistence times", "normalized persistence", "density", {}, false};
    for (std::size_t e = 0; e < curves.size(); ++e) {
      const double frac = curves.size() > 1 ? static_cast<double>(e) / static_cast<double>(curves.size() - 1) : 0.0;
      SvgSeries s{"epoch " + std::to_string(r.records[e].epoch), grid, {}, ramp_color(frac)};
      for (double v : curves[e]) s.y.emplace_back(v);
      chart.series.push_back(std::move(s));
    }
    const fs::path svg = stem.string() + "_densities.svg";
    write_svg(svg, chart);
    artifacts.push_back(svg);
  }
}

}  // namespace

TrackResult cmd_track(const TrackOptions& opt) {
  const SnapshotManifest manifest = load_manifest(opt.manifest);
  const fs::path base = opt.manifest.parent_path();
  const auto snapshots = load_run(manifest, base);
  const MetricSelection sel = opt.selection.resolve(snapshots.front().has_labels());

  std::vector<int> epochs;
  for (const auto& e : manifest.epochs) epochs.push_back(e.epoch);

  TrackResult res;
  res.report = build_run_report(manifest.run_id, snapshots, epochs, opt.settings, sel, opt.delta, opt.window);
  res.report_path = opt.out ? *opt.out : base / "run_report.json";
  {
    auto out = open_output(res.report_path);
    out << to_json(res.report).dump(2) << '\n';
  }
  if (opt.plot) {
    fs::path stem = res.report_path;
    stem.replace_extension();
    write_track_plots(res.report, stem, res.artifacts);
  }
  return res;
}

// ---------------------------------------------------------------- toy

namespace {

std::string run_name(const ToyRunSummary& s) {
  std::ostringstream name;
  name << (s.layer_norm ? "layernorm" : "plain") << '_' << std::setw(3) << std::setfill('0') << s.dataset;
  return name.str();
}

std::string epoch_file(int epoch) {
  std::ostringstream name;
  name << "epoch_" << std::setw(3) << std::setfill('0') << epoch << ".csv";
  return name.str();
}

}  // namespace

ToyResult cmd_toy(const ToyOptions& opt) {
  ToyResult res;
  fs::create_directories(opt.out_dir);
  const auto& cfg = opt.experiment;

  ToyRunSink sink;
  if (opt.snapshot_stride > 0) {
    sink = [&](const ToyRunSummary& s, const EmbeddingTrace& trace) {
      const fs::path dir = opt.out_dir / "runs" / run_name(s);
      fs::create_directories(dir);
      SnapshotManifest m;
      m.run_id = run_name(s);
      const std::size_t last = trace.epochs.size() - 1;
      for (std::size_t e = 0; e <= last; ++e) {
        if (e % opt.snapshot_stride != 0 && e != last) continue;
        const std::string file = epoch_file(trace.epochs[e]);
        write_snapshot(dir / file, trace.embeddings[e]);
        m.epochs.push_back({trace.epochs[e], file});
      }
      m.metadata = {{"variant", s.layer_norm ? "layernorm" : "plain"},
                    {"dataset", std::to_string(s.dataset)},
                    {"data_seed", std::to_string(s.data_seed)},
                    {"net_seed", std::to_string(s.net_seed)},
                    {"clusters_per_class", std::to_string(s.clusters_per_class)},
                    {"class_sep", format_real(cfg.class_sep)},
                    {"lr", format_real(cfg.lr)},
                    {"seed", std::to_string(cfg.seed)}};
      save_manifest(dir / "manifest.json", m);
    };
  }
  res.runs = run_toy_experiment(cfg, sink);
  if (opt.snapshot_stride > 0)
    for (const auto& s : res.runs) res.manifests.push_back(opt.out_dir / "runs" / run_name(s) / "manifest.json");

  res.summary_csv = opt.out_dir / "toy_summary.csv";
  {
    auto out = open_output(res.summary_csv);
    out << "variant,dataset,data_seed,net_seed,clusters_per_class,final_loss,final_auc,median_persistence,"
           "mean_persistence,p_lt_t\n";
    for (const auto& s : res.runs) {
      NormalizedPersistences np{s.final_persistences};
      double mean = 0.0;
      for (double v : s.final_persistences) mean += v;
      mean /= static_cast<double>(s.final_persistences.size());
      out << (s.layer_norm ? "layernorm" : "plain") << ',' << s.dataset << ',' << s.data_seed << ',' << s.net_seed
          << ',' << s.clusters_per_class << ',' << format_real(s.final_loss) << ',' << format_real(s.final_auc) << ','
          << format_real(median(s.final_persistences)) << ',' << format_real(mean) << ','
          << format_real(persistence_statistic(np, opt.t)) << '\n';
    }
  }
  res.persistences_csv = opt.out_dir / "toy_persistences.csv";
  {
    auto out = open_output(res.persistences_csv);
    out << "variant,dataset,stage,value\n";
    for (const auto& s : res.runs) {
      const char* variant = s.layer_norm ? "layernorm" : "plain";
      for (double v : s.initial_persistences) out << variant << ',' << s.dataset << ",initial," << format_real(v) << '\n';
      for (double v : s.final_persistences) out << variant << ',' << s.dataset << ",final," << format_real(v) << '\n';
    }
  }
  return res;
}

Json toy_digest(const ToyResult& res, double t) {
  Json j;
  j["schema"] = kReportSchema;
  j["summary_csv"] = res.summary_csv.string();
  j["persistences_csv"] = res.persistences_csv.string();
  j["runs"] = res.runs.size();
  j["variants"] = Json::object();
  for (bool ln : {false, true}) {
    std::vector<double> pooled, aucs;
    for (const auto& s : res.runs) {
      if (s.layer_norm != ln) continue;
      pooled.insert(pooled.end(), s.final_persistences.begin(), s.final_persistences.end());
      aucs.push_back(s.final_auc);
    }
    if (aucs.empty()) continue;
    double mean_auc = 0.0;
    for (double a : aucs) mean_auc += a;
    mean_auc /= static_cast<double>(aucs.size());
    j["variants"][ln ? "layernorm" : "plain"] =
        Json{{"runs", aucs.size()},
             {"mean_final_auc", mean_auc},
             {"median_final_persistence", median(pooled)},
             {"p_lt_t", persistence_statistic(NormalizedPersistences{pooled}, t)}};
  }
  return j;
}

}  // namespace sepph::cli
