#include "cli/app.hpp"

#include <CLI11.hpp>

#include <ostream>

#include "cli/commands.hpp"
#include "sepph/error.hpp"

namespace sepph::cli {

namespace {

void add_metric_flags(CLI::App* cmd, MetricSelection& sel, MetricSettings& s) {
  cmd->add_flag("--thornton", sel.thornton, "Compute the Thornton index (needs labels)");
  cmd->add_flag("--roc-auc", sel.roc_auc, "Compute cross-validated ROC-AUC (needs labels)");
  cmd->add_flag("--ch", sel.ch, "Compute the Calinski-Harabasz index over k-means clusters");
  cmd->add_option("--t", s.t, "Persistence threshold for P(persistence < t)")->capture_default_str();
  cmd->add_option("--bins", s.bins, "Histogram bins on [0,1]")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--k", s.k, "Neighbors for the Thornton index")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--clusters", s.clusters, "k-means clusters for Calinski-Harabasz")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  cmd->add_option("--splits", s.splits, "Cross-validation folds for ROC-AUC-n")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  cmd->add_option("--fit-lr", s.fit.lr, "Softmax regression learning rate")->capture_default_str();
  cmd->add_option("--fit-epochs", s.fit.epochs, "Softmax regression epochs")->capture_default_str();
  cmd->add_option("--seed", s.seed, "Seed for k-means and fold assignment")->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Class separability of embedding snapshots from H0 persistence"};
  app.name("sepph");
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Read options from a key=value file (flags take precedence)");

  GenOptions gen;
  std::string gen_out = "dataset.csv";
  auto* gen_cmd = app.add_subcommand("gen", "Generate a labelled synthetic dataset");
  gen_cmd->add_option("--n", gen.synth.n_samples, "Number of points")->capture_default_str();
  gen_cmd->add_option("--d", gen.synth.n_features, "Dimension")->capture_default_str();
  gen_cmd->add_option("--classes", gen.synth.n_classes, "Number of classes")->capture_default_str();
  gen_cmd->add_option("--clusters-per-class", gen.synth.clusters_per_class, "Gaussian clusters per class")
      ->capture_default_str();
  gen_cmd->add_option("--class-sep", gen.synth.class_sep, "Half side of the centre hypercube")->capture_default_str();
  gen_cmd->add_option("--seed", gen.synth.seed, "Generator seed")->capture_default_str();
  gen_cmd->add_option("--out,-o", gen_out, "Output snapshot CSV")->capture_default_str();

  H0Options h0;
  auto* h0_cmd = app.add_subcommand("h0", "H0 persistence summary of one snapshot");
  h0_cmd->add_option("snapshot", h0.snapshot, "Snapshot CSV")->required();
  h0_cmd->add_option("--t", h0.t, "Persistence threshold")->capture_default_str();
  h0_cmd->add_option("--bins", h0.bins, "Histogram bins")->capture_default_str()->check(CLI::PositiveNumber);
  h0_cmd->add_flag("--values", h0.include_values, "Include the normalized persistences");
  h0_cmd->add_option("--seed", h0.seed, "Recorded in the report")->capture_default_str();

  SeparabilityOptions sep;
  std::string sep_labels;
  auto* sep_cmd = app.add_subcommand("separability", "Separability metrics of one snapshot");
  sep_cmd->add_option("snapshot", sep.snapshot, "Snapshot CSV")->required();
  sep_cmd->add_option("--labels", sep_labels, "Label file (header 'label'), overrides a label column");
  add_metric_flags(sep_cmd, sep.selection, sep.settings);

  TrackOptions track;
  std::string track_out;
  auto* track_cmd = app.add_subcommand("track", "Per-epoch report over a snapshot manifest");
  track_cmd->add_option("manifest", track.manifest, "Manifest JSON")->required();
  track_cmd->add_option("--out,-o", track_out, "Report path (default: run_report.json beside the manifest)");
  track_cmd->add_option("--delta", track.delta, "Convergence tolerance on successive P(p<t)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  track_cmd->add_option("--window", track.window, "Consecutive small steps required")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  track_cmd->add_flag("--plot", track.plot, "Also write metric and density SVG plots with their CSV data");
  add_metric_flags(track_cmd, track.selection, track.settings);

  ToyOptions toy;
  std::string toy_variant = "both";
  std::string toy_dir = "toy_runs";
  auto* toy_cmd = app.add_subcommand("toy", "Train the toy MLP with and without LayerNorm on synthetic datasets");
  toy_cmd->add_option("--layer-norm", toy_variant, "Variants to run")
      ->capture_default_str()
      ->check(CLI::IsMember({"both", "on", "off"}));
  toy_cmd->add_option("--datasets", toy.experiment.datasets, "Number of seeded datasets")->capture_default_str();
  toy_cmd->add_option("--epochs", toy.experiment.epochs, "Training epochs")->capture_default_str();
  toy_cmd->add_option("--samples", toy.experiment.samples, "Points per dataset (half train, half tracking)")
      ->capture_default_str();
  toy_cmd->add_option("--features", toy.experiment.features, "Input dimension")->capture_default_str();
  toy_cmd->add_option("--class-sep", toy.experiment.class_sep, "Class separation")->capture_default_str();
  toy_cmd->add_option("--clusters-per-class", toy.experiment.clusters_per_class,
                      "Clusters per class; 0 draws 1..3 per dataset")
      ->capture_default_str();
  toy_cmd->add_option("--lr", toy.experiment.lr, "Adam learning rate")->capture_default_str();
  toy_cmd->add_option("--seed", toy.experiment.seed, "Experiment seed")->capture_default_str();
  toy_cmd->add_option("--t", toy.t, "Persistence threshold for the summary")->capture_default_str();
  toy_cmd->add_option("--snapshot-stride", toy.snapshot_stride, "Write every n-th epoch snapshot; 0 disables")
      ->capture_default_str();
  toy_cmd->add_option("--out-dir", toy_dir, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "sepph: " << e.what() << '\n';
    return kParseError;
  }

  try {
    if (*gen_cmd) {
      gen.out = gen_out;
      out << cmd_gen(gen).dump(2) << '\n';
    } else if (*h0_cmd) {
      out << cmd_h0(h0).dump(2) << '\n';
    } else if (*sep_cmd) {
      if (!sep_labels.empty()) sep.labels = sep_labels;
      out << cmd_separability(sep).dump(2) << '\n';
    } else if (*track_cmd) {
      if (!track_out.empty()) track.out = track_out;
      const auto res = cmd_track(track);
      Json j{{"schema", kReportSchema},
             {"seed", track.settings.seed},
             {"report", res.report_path.string()},
             {"epochs", res.report.records.size()},
             {"convergence_epoch",
              res.report.convergence_epoch ? Json(*res.report.convergence_epoch) : Json(nullptr)}};
      j["artifacts"] = Json::array();
      for (const auto& a : res.artifacts) j["artifacts"].push_back(a.string());
      out << j.dump(2) << '\n';
    } else if (*toy_cmd) {
      toy.experiment.run_plain = toy_variant != "on";
      toy.experiment.run_layer_norm = toy_variant != "off";
      toy.out_dir = toy_dir;
      Json j = toy_digest(cmd_toy(toy), toy.t);
      j["seed"] = toy.experiment.seed;
      out << j.dump(2) << '\n';
    }
  } catch (const ParseError& e) {
    err << "sepph: parse error: " << e.what() << '\n';
    return kParseError;
  } catch (const MissingLabels& e) {
    err << "sepph: missing labels: " << e.what() << '\n';
    return kMissingLabels;
  } catch (const ShapeMismatch& e) {
    err << "sepph: shape mismatch: " << e.what() << '\n';
    return kShapeMismatch;
  } catch (const std::exception& e) {
    err << "sepph: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}

}  // namespace sepph::cli
