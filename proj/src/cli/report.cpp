#include "cli/report.hpp"

#include <exception>

#include "sepph/error.hpp"
#include "sepph/homology.hpp"

namespace sepph::cli {

MetricSelection MetricSelection::resolve(bool labelled) const {
  if ((thornton || roc_auc) && !labelled) throw MissingLabels("supervised metric requested but the data has no labels");
  if (any()) return *this;
  return {labelled, labelled, true};
}

EpochRecord summarize_snapshot(const PointCloud& pc, int epoch, const MetricSettings& s, const MetricSelection& sel,
                               NormalizedPersistences* persistences) {
  EpochRecord rec;
  rec.epoch = epoch;
  rec.n_points = pc.size();
  const DistanceMatrix dm = pairwise_distances(pc);
  const auto np = normalize_diagram(h0_persistence(dm));
  rec.n_bars = np.values.size();
  rec.p_lt_t = persistence_statistic(np, s.t);
  rec.histogram = persistence_density(np, s.bins);
  if (persistences) *persistences = np;
  if (sel.thornton) rec.thornton = thornton_index(pc, dm, s.k);
  if (sel.ch) rec.ch = calinski_harabasz(pc, s.clusters, s.seed);
  if (sel.roc_auc) {
    rec.roc_auc = roc_auc_n(pc, s.splits, s.seed, s.fit);
    rec.roc_auc->epoch = epoch;
  }
  return rec;
}

std::map<std::string, std::vector<std::optional<double>>> raw_series(const RunReport& r) {
  std::map<std::string, std::vector<std::optional<double>>> out;
  for (const auto& rec : r.records) {
    out["p_lt_t"].push_back(rec.p_lt_t);
    if (r.selection.thornton) out["thornton"].push_back(rec.thornton);
    if (r.selection.ch)
      out["calinski_harabasz"].push_back(rec.ch && !rec.ch->infinite ? std::optional<double>(rec.ch->value)
                                                                       : std::nullopt);
    if (r.selection.roc_auc)
      out["roc_auc"].push_back(rec.roc_auc ? std::optional<double>(rec.roc_auc->value) : std::nullopt);
  }
  return out;
}

RunReport build_run_report(const std::string& run_id, const std::vector<PointCloud>& snapshots,
                           const std::vector<int>& epochs, const MetricSettings& settings,
                           const MetricSelection& selection, double delta, std::size_t window) {
  if (snapshots.size() != epochs.size()) throw InvalidArgument("one epoch number per snapshot required");
  if (snapshots.empty()) throw InvalidArgument("run has no snapshots");

  RunReport r;
  r.run_id = run_id;
  r.settings = settings;
  r.selection = selection;
  r.delta = delta;
  r.window = window;

  const std::size_t n = snapshots.size();
  r.records.resize(n);
  std::vector<NormalizedPersistences> persistences(n);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t e = 0; e < n; ++e) {
    try {
      r.records[e] = summarize_snapshot(snapshots[e], epochs[e], settings, selection, &persistences[e]);
    } catch (...) {
#pragma omp critical(sepph_track_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t e = 1; e < n; ++e)
    r.records[e].density_distance_to_previous = density_distance(persistences[e - 1], persistences[e]);

  for (const auto& [name, values] : raw_series(r)) {
    std::vector<double> plain;
    bool complete = true;
    for (const auto& v : values) {
      if (!v) complete = false;
      else plain.push_back(*v);
    }
    auto& slot = r.normalized[name];
    if (!complete) continue;
    try {
      slot = normalize_series(plain);
    } catch (const InvalidArgument&) {
      // all-zero series: left absent
    }
  }

  StatisticSeries series;
  series.epochs = epochs;
  for (const auto& rec : r.records) series.values.push_back(rec.p_lt_t);
  r.convergence_epoch = detect_convergence(series, delta, window);
  r.persistences = std::move(persistences);
  return r;
}

Json to_json(const MetricReport& m) {
  Json j;
  j["name"] = m.name;
  j["value"] = m.value;
  if (m.ci_low) j["ci_low"] = *m.ci_low;
  if (m.ci_high) j["ci_high"] = *m.ci_high;
  if (m.epoch) j["epoch"] = *m.epoch;
  return j;
}

Json to_json(const Density& d) {
  return Json{{"bins", d.masses.size()}, {"bin_edges", d.bin_edges}, {"masses", d.masses}};
}

namespace {
Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }
}  // namespace

Json to_json(const RunReport& r) {
  Json j;
  j["schema"] = kReportSchema;
  j["run_id"] = r.run_id;
  j["seed"] = r.settings.seed;
  j["config"] = Json{{"t", r.settings.t},
                     {"bins", r.settings.bins},
                     {"delta", r.delta},
                     {"window", r.window},
                     {"k", r.settings.k},
                     {"clusters", r.settings.clusters},
                     {"splits", r.settings.splits},
                     {"fit_lr", r.settings.fit.lr},
                     {"fit_epochs", r.settings.fit.epochs}};
  j["metrics"] = Json{{"thornton", r.selection.thornton},
                      {"roc_auc", r.selection.roc_auc},
                      {"calinski_harabasz", r.selection.ch}};
  j["epochs"] = Json::array();
  for (const auto& rec : r.records) {
    Json e;
    e["epoch"] = rec.epoch;
    e["n_points"] = rec.n_points;
    e["n_bars"] = rec.n_bars;
    e["p_lt_t"] = rec.p_lt_t;
    if (r.selection.thornton) e["thornton"] = optional_number(rec.thornton);
    if (r.selection.ch) {
      e["calinski_harabasz"] = rec.ch ? Json{{"value", rec.ch->infinite ? Json(nullptr) : Json(rec.ch->value)},
                                             {"infinite", rec.ch->infinite}}
                                      : Json(nullptr);
    }
    if (r.selection.roc_auc) {
      e["roc_auc"] = rec.roc_auc ? Json{{"mean", rec.roc_auc->value},
                                        {"ci_low", *rec.roc_auc->ci_low},
                                        {"ci_high", *rec.roc_auc->ci_high}}
                                 : Json(nullptr);
    }
    e["density_distance_to_previous"] = optional_number(rec.density_distance_to_previous);
    e["histogram"] = rec.histogram.masses;
    j["epochs"].push_back(std::move(e));
  }
  j["normalized"] = Json::object();
  for (const auto& [name, series] : r.normalized) j["normalized"][name] = series ? Json(*series) : Json(nullptr);
  j["convergence_epoch"] = r.convergence_epoch ? Json(*r.convergence_epoch) : Json(nullptr);
  return j;
}

}  // namespace sepph::cli
