// driftbench: simulate dynamic RSSI fingerprint databases, profile temporal
// drift, train localization models and evaluate their decay over daily time
// slices. See README.md for the full pipeline.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "driftbench/csv.hpp"
#include "driftbench/driftstats.hpp"
#include "driftbench/errors.hpp"
#include "driftbench/evalharness.hpp"
#include "driftbench/fpdb.hpp"
#include "driftbench/fsio.hpp"
#include "driftbench/gp.hpp"
#include "driftbench/iforest.hpp"
#include "driftbench/nn.hpp"
#include "driftbench/svg.hpp"
#include "driftbench/synth.hpp"
#include "driftbench/timeutil.hpp"

namespace fs = std::filesystem;
using namespace driftbench;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::uint64_t seed = 42;
  bool seed_given = false;
  bool quiet = false;
  bool reproducible = false;
  int threads = 1;  // worker cap; stages currently run one worker
};

std::pair<int, int> parse_day_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 >= text.size())
    throw UsageError("day range must look like a:b, got '" + text + "'");
  try {
    const int first = std::stoi(text.substr(0, colon));
    const int last = std::stoi(text.substr(colon + 1));
    return {first, last};
  } catch (const std::exception&) {
    throw UsageError("day range must look like a:b, got '" + text + "'");
  }
}

fpdb::DynamicDatabase load_db_dir(const fs::path& dir) {
  return fpdb::load_native(dir / "records.csv", dir / "readings.csv",
                           dir / "rps.csv");
}

void export_db_dir(const fpdb::DynamicDatabase& db, const fs::path& dir) {
  fsio::ensure_directory(dir);
  fpdb::export_native(db, dir / "records.csv", dir / "readings.csv",
                      dir / "rps.csv");
}

void note(const GlobalOptions& global, const std::string& line) {
  if (!global.quiet) std::cout << line << '\n';
}

std::uint64_t env_seed_or(std::uint64_t fallback) {
  const char* env = std::getenv("DRIFTBENCH_SEED");
  if (!env) return fallback;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0')
    throw Error(Errc::invalid_config,
                std::string("DRIFTBENCH_SEED is not an integer: ") + env);
  return static_cast<std::uint64_t>(value);
}

driftstats::FeatureMode parse_feature_mode(const std::string& text) {
  if (text == "mean") return driftstats::FeatureMode::mean;
  if (text == "stats") return driftstats::FeatureMode::stats;
  throw UsageError("--features must be 'mean' or 'stats'");
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  std::string config_path;
  int days = 44;
  std::string out;
};

void run_synth(const GlobalOptions& global, const SynthArgs& args) {
  const auto cfg = synth::EnvironmentConfig::from_json(
      nlohmann::json::parse(fsio::read_file(args.config_path), nullptr, true, true));
  const auto env = synth::build_environment(cfg, global.seed);
  const auto db = synth::simulate(env, cfg, args.days, global.seed);
  export_db_dir(db, args.out);
  synth::write_manifest(fs::path(args.out) / "manifest.json", cfg, global.seed,
                        args.days, db, global.reproducible);
  note(global, "synth: " + std::to_string(db.record_count()) + " records over " +
                   std::to_string(args.days) + " days, " +
                   std::to_string(db.ap_index().size()) + " distinct APs -> " +
                   args.out);
}

struct ImportArgs {
  std::string wide;
  int not_detected_code = 100;
  std::string records, readings, rps;
  std::string out;
};

void run_import(const GlobalOptions& global, const ImportArgs& args) {
  fpdb::DynamicDatabase db;
  if (!args.wide.empty()) {
    db = fpdb::import_wide(args.wide, args.not_detected_code);
  } else {
    if (args.records.empty() || args.readings.empty() || args.rps.empty())
      throw UsageError("import needs either --wide or all of --records/--readings/--rps");
    db = fpdb::load_native(args.records, args.readings, args.rps);
  }
  export_db_dir(db, args.out);

  std::size_t readings = 0;
  for (const auto& rec : db.records()) readings += rec.readings.size();
  nlohmann::ordered_json manifest;
  manifest["tool"] = "driftbench";
  manifest["version"] = "0.1.0";
  manifest["source"] = args.wide.empty() ? args.records : args.wide;
  if (!args.wide.empty()) manifest["not_detected_code"] = args.not_detected_code;
  manifest["counts"] = {{"records", db.record_count()},
                        {"readings", readings},
                        {"aps", db.ap_index().size()},
                        {"rps", db.rps().size()}};
  fsio::atomic_write_file(fs::path(args.out) / "manifest.json",
                          manifest.dump(2) + "\n");
  note(global, "import: " + std::to_string(db.record_count()) + " records -> " +
                   args.out);
}

struct StatsArgs {
  std::string db_dir;
  std::string ap;
  int rp = 0;
  std::string out;
  // anomaly only
  double contamination = 0.10;
  int trees = 100;
  std::string max_samples = "auto";
  double max_features = 1.0;
  std::string features = "mean";
};

void run_stats_variance(const GlobalOptions& global, const StatsArgs& args) {
  const auto db = load_db_dir(args.db_dir);
  const auto profile = driftstats::variance_profile(db, args.ap, args.rp);
  fsio::ensure_directory(args.out);

  std::ostringstream csv;
  csv << "day_index,mean_rssi,detection_fraction\n";
  for (const auto& day : profile.per_day_means) {
    csv << day.day_index << ',' << csvio::format_double(day.mean) << ','
        << csvio::format_double(day.detection_fraction) << '\n';
  }
  fsio::atomic_write_file(fs::path(args.out) / "variance.csv", csv.str());

  nlohmann::ordered_json j;
  j["ap"] = args.ap;
  j["rp"] = args.rp;
  j["n_detections"] = profile.n_detections;
  j["variance"] = profile.variance;
  j["variance_unbiased"] = profile.variance_unbiased;
  fsio::atomic_write_file(fs::path(args.out) / "variance.json", j.dump(2) + "\n");
  note(global, "variance(" + args.ap + ", rp " + std::to_string(args.rp) +
                   ") = " + csvio::format_double(profile.variance) + " over " +
                   std::to_string(profile.n_detections) + " detections");
}

void run_stats_anomaly(const GlobalOptions& global, const StatsArgs& args) {
  const auto db = load_db_dir(args.db_dir);
  driftstats::ForestHyperparams hyper;
  hyper.n_estimators = args.trees;
  hyper.contamination = args.contamination;
  hyper.max_features = args.max_features;
  hyper.random_state = global.seed;
  if (args.max_samples != "auto") {
    try {
      hyper.max_samples = std::stoi(args.max_samples);
    } catch (const std::exception&) {
      throw UsageError("--max-samples must be 'auto' or an integer");
    }
  }
  const auto rows = driftstats::score_days(db, args.ap, args.rp,
                                           parse_feature_mode(args.features), hyper);
  fsio::ensure_directory(args.out);
  driftstats::write_anomaly_csv(fs::path(args.out) / "anomaly.csv", rows);

  std::size_t flagged = 0;
  for (const auto& row : rows) flagged += row.flagged ? 1 : 0;
  note(global, "anomaly: " + std::to_string(rows.size()) + " days scored, " +
                   std::to_string(flagged) + " flagged -> " + args.out);
}

struct ModelArgs {
  std::string db_dir;
  std::string train_days = "1:24";
  std::string test_days = "25:44";
  std::string out;
  std::string model;  // eval only: reuse a trained model file
  int group_size = 5;
  int trend_degree = 6;
  // dnn knobs
  int epochs_sae = 30, epochs_cls = 30, batch_size = 20;
  double lr_sae = 1e-4, lr_cls = 1e-3;
  int hid_dim = 512, sae_dim = 64;
  bool freeze_encoder = false;
  // gp knobs
  double kernel_variance = 1.0, lengthscale = 100.0, noise = 1.0;
};

locmodels::DnnConfig dnn_config(const GlobalOptions& global, const ModelArgs& args) {
  locmodels::DnnConfig cfg;
  cfg.epochs_sae = args.epochs_sae;
  cfg.epochs_cls = args.epochs_cls;
  cfg.batch_size = args.batch_size;
  cfg.lr_sae = args.lr_sae;
  cfg.lr_cls = args.lr_cls;
  cfg.hid_dim = args.hid_dim;
  cfg.sae_dim = args.sae_dim;
  cfg.freeze_encoder = args.freeze_encoder;
  // the model's own default seed stands unless --seed was given explicitly
  if (global.seed_given) cfg.seed = global.seed;
  return cfg;
}

locmodels::GpConfig gp_config(const ModelArgs& args) {
  locmodels::GpConfig cfg;
  cfg.kernel_variance = args.kernel_variance;
  cfg.lengthscale = args.lengthscale;
  cfg.noise_variance = args.noise;
  return cfg;
}

locmodels::DnnClassifier train_dnn_on(const fpdb::DynamicDatabase& db,
                                      const std::pair<int, int>& train_days,
                                      locmodels::DnnConfig cfg) {
  auto train = db.slice_days(train_days.first, train_days.second);
  if (train.empty())
    throw Error(Errc::empty_train_slice, "no records in the training window");
  const auto universe = fpdb::aps_in_view(train);
  if (universe.empty())
    throw Error(Errc::empty_train_slice, "training slice contains no AP readings");
  auto slab = fpdb::to_matrix(train, universe);
  cfg.n_aps = static_cast<int>(universe.size());
  const auto x = locmodels::normalize_input(slab.matrix);
  const auto encoder = locmodels::train_sae(x, cfg);
  auto clf = locmodels::train_classifier(x, slab.row_labels, encoder, cfg);
  clf.set_ap_universe(universe);
  return clf;
}

locmodels::GpModel train_gp_on(const fpdb::DynamicDatabase& db,
                               const std::pair<int, int>& train_days,
                               const locmodels::GpConfig& cfg) {
  auto train = db.slice_days(train_days.first, train_days.second);
  if (train.empty())
    throw Error(Errc::empty_train_slice, "no records in the training window");
  const auto universe = fpdb::aps_in_view(train);
  if (universe.empty())
    throw Error(Errc::empty_train_slice, "training slice contains no AP readings");
  auto slab = fpdb::to_matrix(train, universe);
  auto model = locmodels::GpModel::fit(slab.matrix, slab.row_coords, cfg);
  model.set_ap_universe(universe);
  return model;
}

void run_train(const GlobalOptions& global, const ModelArgs& args, bool dnn) {
  const auto train_days = parse_day_range(args.train_days);
  if (args.out.empty()) throw UsageError("--out model file is required");
  const auto db = load_db_dir(args.db_dir);
  if (dnn) {
    const auto clf = train_dnn_on(db, train_days, dnn_config(global, args));
    fsio::atomic_write_file(args.out, clf.serialize());
    note(global, "train dnn: " + std::to_string(clf.class_labels().size()) +
                     " classes, " + std::to_string(clf.ap_universe().size()) +
                     " APs -> " + args.out);
  } else {
    const auto model = train_gp_on(db, train_days, gp_config(args));
    fsio::atomic_write_file(args.out, model.serialize());
    note(global, "train gp: " + std::to_string(model.train_count()) +
                     " training rows -> " + args.out);
  }
}

void write_report_bundle(const evalharness::DriftReport& report, const fs::path& dir) {
  fsio::ensure_directory(dir);
  evalharness::write_report_json(report, dir / "report.json");
  evalharness::write_per_day_csv(report, dir / "per_day.csv");
  evalharness::write_trend_csv(report, dir / "trend.csv");
  svg::write_drift_svg(report, dir / "drift.svg");
}

void run_eval(const GlobalOptions& global, const ModelArgs& args, bool dnn) {
  const auto train_days = parse_day_range(args.train_days);
  const auto test_days = parse_day_range(args.test_days);
  const auto db = load_db_dir(args.db_dir);
  evalharness::SplitSpec split{train_days.first, train_days.second, test_days.first,
                               test_days.second};
  const evalharness::EvalOptions opts{args.group_size, args.trend_degree};

  evalharness::DriftReport report;
  if (dnn) {
    if (!args.model.empty()) {
      const auto clf =
          locmodels::DnnClassifier::deserialize(fsio::read_file(args.model));
      report = evalharness::run_dnn_eval_with_model(db, split, clf, opts);
    } else {
      report = evalharness::run_dnn_eval(db, split, dnn_config(global, args), opts);
    }
  } else {
    if (!args.model.empty()) {
      const auto model = locmodels::GpModel::deserialize(fsio::read_file(args.model));
      report = evalharness::run_gp_eval_with_model(db, split, model, opts);
    } else {
      report = evalharness::run_gp_eval(db, split, gp_config(args), opts);
    }
    report.seed = global.seed;
  }
  write_report_bundle(report, args.out);
  std::ostringstream summary;
  summary << "eval " << report.model_kind << ": per-day "
          << (dnn ? "accuracy" : "error") << " min/mean/max = "
          << csvio::format_double(report.min) << '/'
          << csvio::format_double(report.mean) << '/'
          << csvio::format_double(report.max) << " -> " << args.out;
  note(global, summary.str());
}

struct ReportArgs {
  std::string in;
  std::string out;
};

void run_report(const GlobalOptions& global, const ReportArgs& args) {
  const auto report = evalharness::DriftReport::from_json(
      nlohmann::ordered_json::parse(fsio::read_file(args.in)));
  write_report_bundle(report, args.out);
  note(global, "report: re-rendered " + args.in + " -> " + args.out);
}

}  // namespace

int main(int argc, char** argv) {
  GlobalOptions global;
  CLI::App app{"driftbench: dynamic Wi-Fi RSSI fingerprint drift toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  auto* seed_opt =
      app.add_option("--seed", global.seed, "global seed (env DRIFTBENCH_SEED)")
          ->capture_default_str();
  app.add_flag("--quiet", global.quiet, "suppress progress output");
  app.add_flag("--reproducible", global.reproducible,
               "omit wall-clock stamps from manifests");
  app.add_option("--threads", global.threads, "worker cap for parallel stages")
      ->capture_default_str();

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic dynamic database");
  synth_cmd->add_option("--config", synth_args.config_path, "environment config JSON")
      ->required();
  synth_cmd->add_option("--days", synth_args.days, "number of days to simulate")
      ->capture_default_str();
  synth_cmd->add_option("--out", synth_args.out, "output directory")->required();

  ImportArgs import_args;
  auto* import_cmd = app.add_subcommand("import", "import a database into native CSVs");
  import_cmd->add_option("--wide", import_args.wide, "wide-format CSV file");
  import_cmd
      ->add_option("--not-detected-code", import_args.not_detected_code,
                   "wide cell value meaning 'not detected'")
      ->capture_default_str();
  import_cmd->add_option("--records", import_args.records, "native records.csv");
  import_cmd->add_option("--readings", import_args.readings, "native readings.csv");
  import_cmd->add_option("--rps", import_args.rps, "native rps.csv");
  import_cmd->add_option("--out", import_args.out, "output directory")->required();

  StatsArgs stats_args;
  auto* stats_cmd = app.add_subcommand("stats", "temporal drift statistics");
  stats_cmd->require_subcommand(1);
  auto add_stats_common = [&](CLI::App* cmd) {
    cmd->add_option("--db", stats_args.db_dir, "database directory")->required();
    cmd->add_option("--ap", stats_args.ap, "access point id")->required();
    cmd->add_option("--rp", stats_args.rp, "reference point id")->required();
    cmd->add_option("--out", stats_args.out, "output directory")->required();
  };
  auto* variance_cmd =
      stats_cmd->add_subcommand("variance", "per-day means and overall variance");
  add_stats_common(variance_cmd);
  auto* anomaly_cmd =
      stats_cmd->add_subcommand("anomaly", "isolation-forest anomaly scores per day");
  add_stats_common(anomaly_cmd);
  anomaly_cmd
      ->add_option("--contamination", stats_args.contamination,
                   "assumed anomaly fraction")
      ->capture_default_str();
  anomaly_cmd->add_option("--trees", stats_args.trees, "number of trees")
      ->capture_default_str();
  anomaly_cmd
      ->add_option("--max-samples", stats_args.max_samples,
                   "per-tree subsample: 'auto' or a count")
      ->capture_default_str();
  anomaly_cmd
      ->add_option("--max-features", stats_args.max_features,
                   "fraction of features per tree")
      ->capture_default_str();
  anomaly_cmd
      ->add_option("--features", stats_args.features,
                   "per-day feature vector: mean | stats")
      ->capture_default_str();

  ModelArgs model_args;
  auto add_model_common = [&](CLI::App* cmd, bool with_test) {
    cmd->add_option("--db", model_args.db_dir, "database directory")->required();
    cmd->add_option("--train-days", model_args.train_days, "training day range a:b")
        ->capture_default_str();
    if (with_test) {
      cmd->add_option("--test-days", model_args.test_days, "test day range a:b")
          ->capture_default_str();
      cmd->add_option("--group", model_args.group_size, "days per group average")
          ->capture_default_str();
      cmd->add_option("--polyfit", model_args.trend_degree, "trend polynomial degree")
          ->capture_default_str();
      cmd->add_option("--model", model_args.model,
                      "evaluate this model file instead of training");
    }
    cmd->add_option("--out", model_args.out,
                    with_test ? "report output directory" : "model output file")
        ->required();
  };
  auto add_dnn_knobs = [&](CLI::App* cmd) {
    cmd->add_option("--epochs-sae", model_args.epochs_sae, "autoencoder epochs")
        ->capture_default_str();
    cmd->add_option("--epochs-cls", model_args.epochs_cls, "classifier epochs")
        ->capture_default_str();
    cmd->add_option("--batch-size", model_args.batch_size, "minibatch size")
        ->capture_default_str();
    cmd->add_option("--lr-sae", model_args.lr_sae, "autoencoder learning rate")
        ->capture_default_str();
    cmd->add_option("--lr-cls", model_args.lr_cls, "classifier learning rate")
        ->capture_default_str();
    cmd->add_option("--hid-dim", model_args.hid_dim, "hidden width")
        ->capture_default_str();
    cmd->add_option("--sae-dim", model_args.sae_dim, "encoder output width")
        ->capture_default_str();
    cmd->add_flag("--freeze-encoder", model_args.freeze_encoder,
                  "do not fine-tune the encoder during classifier training");
  };
  auto add_gp_knobs = [&](CLI::App* cmd) {
    cmd->add_option("--kernel-variance", model_args.kernel_variance, "OU variance")
        ->capture_default_str();
    cmd->add_option("--lengthscale", model_args.lengthscale, "OU lengthscale")
        ->capture_default_str();
    cmd->add_option("--noise", model_args.noise, "likelihood noise variance")
        ->capture_default_str();
  };

  auto* train_cmd = app.add_subcommand("train", "train a localization model");
  train_cmd->require_subcommand(1);
  auto* train_dnn = train_cmd->add_subcommand("dnn", "autoencoder + classifier");
  add_model_common(train_dnn, false);
  add_dnn_knobs(train_dnn);
  auto* train_gp = train_cmd->add_subcommand("gp", "OU-kernel coordinate regressor");
  add_model_common(train_gp, false);
  add_gp_knobs(train_gp);

  auto* eval_cmd = app.add_subcommand("eval", "time-sliced drift evaluation");
  eval_cmd->require_subcommand(1);
  auto* eval_dnn = eval_cmd->add_subcommand("dnn", "classification accuracy per day");
  add_model_common(eval_dnn, true);
  add_dnn_knobs(eval_dnn);
  auto* eval_gp = eval_cmd->add_subcommand("gp", "localization error per day");
  add_model_common(eval_gp, true);
  add_gp_knobs(eval_gp);

  ReportArgs report_args;
  auto* report_cmd =
      app.add_subcommand("report", "re-render CSV/SVG outputs from a report.json");
  report_cmd->add_option("--in", report_args.in, "existing report.json")->required();
  report_cmd->add_option("--out", report_args.out, "output directory")->required();

  try {
    global.seed = env_seed_or(global.seed);
    app.parse(argc, argv);
    global.seed_given = seed_opt->count() > 0;
    if (global.threads < 1) throw UsageError("--threads must be >= 1");

    if (synth_cmd->parsed()) run_synth(global, synth_args);
    if (import_cmd->parsed()) run_import(global, import_args);
    if (stats_cmd->parsed()) {
      if (variance_cmd->parsed()) run_stats_variance(global, stats_args);
      if (anomaly_cmd->parsed()) run_stats_anomaly(global, stats_args);
    }
    if (train_cmd->parsed()) run_train(global, model_args, train_dnn->parsed());
    if (eval_cmd->parsed()) run_eval(global, model_args, eval_dnn->parsed());
    if (report_cmd->parsed()) run_report(global, report_args);
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "error: usage: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: unexpected: " << e.what() << '\n';
    return 2;
  }
}
