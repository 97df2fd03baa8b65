#include "driftbench/evalharness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "driftbench/csv.hpp"
#include "driftbench/errors.hpp"
#include "driftbench/fsio.hpp"
#include "driftbench/stats.hpp"

namespace driftbench::evalharness {

void SplitSpec::validate() const {
  if (train_first > train_last)
    throw Error(Errc::invalid_range, "train window is empty");
  if (test_first > test_last) throw Error(Errc::invalid_range, "test window is empty");
  if (train_last >= test_first)
    throw Error(Errc::invalid_range, "train and test windows must be disjoint and ordered");
}

std::vector<GroupAverage> group_averages(std::span<const DayMetric> series,
                                         int group_size) {
  if (group_size < 1) throw Error(Errc::out_of_range, "group_size must be >= 1");
  std::vector<const DayMetric*> scored;
  for (const auto& d : series)
    if (!d.skipped) scored.push_back(&d);
  if (scored.empty()) throw Error(Errc::empty_input, "no scored days to group");

  std::vector<GroupAverage> groups;
  for (std::size_t begin = 0; begin < scored.size();
       begin += static_cast<std::size_t>(group_size)) {
    const std::size_t end =
        std::min(scored.size(), begin + static_cast<std::size_t>(group_size));
    GroupAverage g;
    g.first_day = scored[begin]->day_index;
    g.last_day = scored[end - 1]->day_index;
    g.count = static_cast<int>(end - begin);
    g.partial = g.count < group_size;
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) acc += scored[i]->metric;
    g.mean = acc / static_cast<double>(g.count);
    groups.push_back(g);
  }
  return groups;
}

std::vector<double> trend_fit(std::span<const DayMetric> series, int degree) {
  std::vector<double> xs, ys;
  for (const auto& d : series) {
    if (d.skipped) continue;
    xs.push_back(static_cast<double>(d.day_index));
    ys.push_back(d.metric);
  }
  return numerics::polyfit(xs, ys, degree);
}

namespace {

void finalize_report(DriftReport& report, const EvalOptions& opts) {
  std::vector<double> metrics;
  for (const auto& d : report.per_day)
    if (!d.skipped) metrics.push_back(d.metric);
  if (metrics.empty())
    throw Error(Errc::empty_input, "no test day produced a metric");
  report.min = *std::min_element(metrics.begin(), metrics.end());
  report.max = *std::max_element(metrics.begin(), metrics.end());
  report.mean = numerics::mean(metrics);

  report.group_size = opts.group_size;
  report.group_averages = group_averages(report.per_day, opts.group_size);

  report.trend_degree = opts.trend_degree;
  try {
    report.trend_coeffs = trend_fit(report.per_day, opts.trend_degree);
    report.trend_ok = true;
    report.trend_error.clear();
  } catch (const Error& e) {
    report.trend_ok = false;
    report.trend_error = e.what();
    report.trend_coeffs.clear();
  }
}

fpdb::DynamicDatabase train_slice(const fpdb::DynamicDatabase& db,
                                  const SplitSpec& split) {
  auto train = db.slice_days(split.train_first, split.train_last);
  if (train.empty())
    throw Error(Errc::empty_train_slice,
                "no records in days " + std::to_string(split.train_first) + ":" +
                    std::to_string(split.train_last));
  return train;
}

}  // namespace

DriftReport run_dnn_eval_with_model(const fpdb::DynamicDatabase& db,
                                    const SplitSpec& split,
                                    const locmodels::DnnClassifier& clf,
                                    const EvalOptions& opts) {
  split.validate();
  const auto& universe = clf.ap_universe();
  if (universe.empty())
    throw Error(Errc::invalid_config, "classifier carries no AP universe");

  DriftReport report;
  report.model_kind = "dnn";
  report.split = split;
  report.seed = clf.config().seed;
  report.model_hash_before = clf.param_hash();

  std::vector<int> class_set = clf.class_labels();  // sorted ascending
  std::size_t excluded_total = 0;
  std::size_t dropped_readings = 0;
  for (int day = split.test_first; day <= split.test_last; ++day) {
    DayMetric dm;
    dm.day_index = day;
    auto view = db.slice_days(day, day);
    if (view.empty()) {
      dm.skipped = true;
      report.per_day.push_back(dm);
      continue;
    }
    auto slab = fpdb::to_matrix(view, universe);
    dropped_readings += slab.dropped_readings;

    // records at RPs the classifier has never seen cannot be scored
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < slab.row_labels.size(); ++i) {
      if (std::binary_search(class_set.begin(), class_set.end(), slab.row_labels[i]))
        keep.push_back(i);
      else
        ++dm.n_excluded;
    }
    excluded_total += static_cast<std::size_t>(dm.n_excluded);
    dm.n_records = static_cast<int>(keep.size());
    if (keep.empty()) {
      dm.skipped = true;
      report.per_day.push_back(dm);
      continue;
    }

    numerics::Matrix x(keep.size(), universe.size());
    for (std::size_t r = 0; r < keep.size(); ++r) {
      const double* src = slab.matrix.row(keep[r]);
      std::copy(src, src + universe.size(), x.row(r));
    }
    const auto predicted = clf.predict_labels(locmodels::normalize_input(x));
    std::size_t correct = 0;
    for (std::size_t r = 0; r < keep.size(); ++r)
      if (predicted[r] == slab.row_labels[keep[r]]) ++correct;
    dm.metric = static_cast<double>(correct) / static_cast<double>(keep.size());
    report.per_day.push_back(dm);
  }

  report.model_hash_after = clf.param_hash();
  finalize_report(report, opts);
  report.metadata["n_classes"] = class_set.size();
  report.metadata["n_aps"] = universe.size();
  report.metadata["excluded_records"] = excluded_total;
  report.metadata["dropped_readings_test"] = dropped_readings;
  return report;
}

DriftReport run_dnn_eval(const fpdb::DynamicDatabase& db, const SplitSpec& split,
                         locmodels::DnnConfig cfg, const EvalOptions& opts) {
  split.validate();
  auto train = train_slice(db, split);
  const auto universe = fpdb::aps_in_view(train);
  if (universe.empty())
    throw Error(Errc::empty_train_slice, "training slice contains no AP readings");

  auto slab = fpdb::to_matrix(train, universe);
  cfg.n_aps = static_cast<int>(universe.size());  // the universe is data-derived
  const auto x = locmodels::normalize_input(slab.matrix);
  auto encoder = locmodels::train_sae(x, cfg);
  auto clf = locmodels::train_classifier(x, slab.row_labels, encoder, cfg);
  clf.set_ap_universe(universe);

  DriftReport report = run_dnn_eval_with_model(db, split, clf, opts);
  report.metadata["n_train_records"] = train.record_count();
  report.metadata["dropped_readings_train"] = slab.dropped_readings;
  report.metadata["epochs_sae"] = cfg.epochs_sae;
  report.metadata["epochs_cls"] = cfg.epochs_cls;
  return report;
}

DriftReport run_gp_eval_with_model(const fpdb::DynamicDatabase& db,
                                   const SplitSpec& split,
                                   const locmodels::GpModel& model,
                                   const EvalOptions& opts) {
  split.validate();
  const auto& universe = model.ap_universe();
  if (universe.empty())
    throw Error(Errc::invalid_config, "gp model carries no AP universe");

  DriftReport report;
  report.model_kind = "gp";
  report.split = split;
  report.model_hash_before = model.param_hash();

  std::size_t dropped_readings = 0;
  for (int day = split.test_first; day <= split.test_last; ++day) {
    DayMetric dm;
    dm.day_index = day;
    auto view = db.slice_days(day, day);
    if (view.empty()) {
      dm.skipped = true;
      report.per_day.push_back(dm);
      continue;
    }
    auto slab = fpdb::to_matrix(view, universe);
    dropped_readings += slab.dropped_readings;
    dm.n_records = static_cast<int>(slab.matrix.rows());
    double total_error = 0.0;
    for (std::size_t r = 0; r < slab.matrix.rows(); ++r) {
      const auto pred = model.predict(
          std::span<const double>(slab.matrix.row(r), slab.matrix.cols()));
      total_error += locmodels::localization_error({pred.x, pred.y},
                                                   slab.row_coords[r]);
    }
    dm.metric = total_error / static_cast<double>(slab.matrix.rows());
    report.per_day.push_back(dm);
  }

  report.model_hash_after = model.param_hash();
  finalize_report(report, opts);
  report.metadata["n_aps"] = universe.size();
  report.metadata["n_train_rows"] = model.train_count();
  report.metadata["dropped_readings_test"] = dropped_readings;
  report.metadata["kernel_variance"] = model.config().kernel_variance;
  report.metadata["lengthscale"] = model.config().lengthscale;
  report.metadata["noise_variance"] = model.config().noise_variance;
  return report;
}

DriftReport run_gp_eval(const fpdb::DynamicDatabase& db, const SplitSpec& split,
                        const locmodels::GpConfig& cfg, const EvalOptions& opts) {
  split.validate();
  auto train = train_slice(db, split);
  const auto universe = fpdb::aps_in_view(train);
  if (universe.empty())
    throw Error(Errc::empty_train_slice, "training slice contains no AP readings");

  auto slab = fpdb::to_matrix(train, universe);
  auto model = locmodels::GpModel::fit(slab.matrix, slab.row_coords, cfg);
  model.set_ap_universe(universe);

  DriftReport report = run_gp_eval_with_model(db, split, model, opts);
  report.metadata["n_train_records"] = train.record_count();
  report.metadata["dropped_readings_train"] = slab.dropped_readings;
  return report;
}

// ---------------------------------------------------------------------------

nlohmann::ordered_json DriftReport::to_json() const {
  nlohmann::ordered_json j;
  j["model"] = model_kind;
  j["split"] = {{"train_first", split.train_first},
                {"train_last", split.train_last},
                {"test_first", split.test_first},
                {"test_last", split.test_last}};
  j["seed"] = seed;
  nlohmann::ordered_json days = nlohmann::ordered_json::array();
  for (const auto& d : per_day) {
    nlohmann::ordered_json e;
    e["day_index"] = d.day_index;
    if (d.skipped)
      e["metric"] = nullptr;
    else
      e["metric"] = d.metric;
    e["n_records"] = d.n_records;
    e["n_excluded"] = d.n_excluded;
    e["skipped"] = d.skipped;
    days.push_back(std::move(e));
  }
  j["per_day"] = std::move(days);
  j["summary"] = {{"min", min}, {"max", max}, {"mean", mean}};
  j["group_size"] = group_size;
  nlohmann::ordered_json groups = nlohmann::ordered_json::array();
  for (const auto& g : group_averages) {
    groups.push_back({{"first_day", g.first_day},
                      {"last_day", g.last_day},
                      {"mean", g.mean},
                      {"count", g.count},
                      {"partial", g.partial}});
  }
  j["group_averages"] = std::move(groups);
  j["trend"] = {{"degree", trend_degree},
                {"ok", trend_ok},
                {"coefficients", trend_coeffs},
                {"error", trend_error}};
  j["model_hash_before"] = model_hash_before;
  j["model_hash_after"] = model_hash_after;
  j["metadata"] = metadata;
  return j;
}

DriftReport DriftReport::from_json(const nlohmann::ordered_json& j) {
  DriftReport r;
  try {
    r.model_kind = j.at("model").get<std::string>();
    const auto& split = j.at("split");
    r.split.train_first = split.at("train_first").get<int>();
    r.split.train_last = split.at("train_last").get<int>();
    r.split.test_first = split.at("test_first").get<int>();
    r.split.test_last = split.at("test_last").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& e : j.at("per_day")) {
      DayMetric d;
      d.day_index = e.at("day_index").get<int>();
      d.skipped = e.at("skipped").get<bool>();
      if (!d.skipped) d.metric = e.at("metric").get<double>();
      d.n_records = e.at("n_records").get<int>();
      d.n_excluded = e.at("n_excluded").get<int>();
      r.per_day.push_back(d);
    }
    const auto& summary = j.at("summary");
    r.min = summary.at("min").get<double>();
    r.max = summary.at("max").get<double>();
    r.mean = summary.at("mean").get<double>();
    r.group_size = j.at("group_size").get<int>();
    for (const auto& e : j.at("group_averages")) {
      GroupAverage g;
      g.first_day = e.at("first_day").get<int>();
      g.last_day = e.at("last_day").get<int>();
      g.mean = e.at("mean").get<double>();
      g.count = e.at("count").get<int>();
      g.partial = e.at("partial").get<bool>();
      r.group_averages.push_back(g);
    }
    const auto& trend = j.at("trend");
    r.trend_degree = trend.at("degree").get<int>();
    r.trend_ok = trend.at("ok").get<bool>();
    r.trend_coeffs = trend.at("coefficients").get<std::vector<double>>();
    r.trend_error = trend.at("error").get<std::string>();
    r.model_hash_before = j.at("model_hash_before").get<std::uint64_t>();
    r.model_hash_after = j.at("model_hash_after").get<std::uint64_t>();
    r.metadata = j.at("metadata");
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, std::string("bad report json: ") + e.what());
  }
  return r;
}

void write_report_json(const DriftReport& report, const std::filesystem::path& path) {
  fsio::atomic_write_file(path, report.to_json().dump(2) + "\n");
}

void write_per_day_csv(const DriftReport& report, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "day_index,metric\n";
  for (const auto& d : report.per_day) {
    if (d.skipped) continue;
    out << d.day_index << ',' << csvio::format_double(d.metric) << '\n';
  }
  fsio::atomic_write_file(path, out.str());
}

void write_trend_csv(const DriftReport& report, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "power,coefficient\n";
  for (std::size_t k = 0; k < report.trend_coeffs.size(); ++k)
    out << k << ',' << csvio::format_double(report.trend_coeffs[k]) << '\n';
  fsio::atomic_write_file(path, out.str());
}

}  // namespace driftbench::evalharness
