#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "driftbench/errors.hpp"
#include "driftbench/evalharness.hpp"
#include "driftbench/fsio.hpp"
#include "driftbench/rng.hpp"
#include "driftbench/stats.hpp"
#include "driftbench/svg.hpp"
#include "driftbench/synth.hpp"
#include "driftbench/timeutil.hpp"

using namespace driftbench;
using evalharness::DayMetric;
using evalharness::DriftReport;
using evalharness::EvalOptions;
using evalharness::SplitSpec;
using numerics::RngStream;

namespace {

std::vector<DayMetric> series_of(const std::vector<double>& values, int first_day = 1) {
  std::vector<DayMetric> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    DayMetric d;
    d.day_index = first_day + static_cast<int>(i);
    d.metric = values[i];
    out.push_back(d);
  }
  return out;
}

// Hand-built database: class c lights up AP block c at a strong level.
// `pair_label` decides whether a record's RP matches its feature block.
fpdb::DynamicDatabase block_db(int n_classes, int block, int records_per_day,
                               const std::vector<int>& days, bool shuffle_labels,
                               std::uint64_t seed) {
  const std::int64_t epoch = timeutil::parse_date_utc("2023-06-01");
  RngStream rng(seed, 0);
  std::vector<fpdb::ReferencePoint> rps;
  for (int c = 0; c < n_classes; ++c)
    rps.push_back(fpdb::ReferencePoint{c, 2.5 * c, 1.5 * c, 0});

  std::vector<fpdb::FingerprintRecord> records;
  std::int64_t id = 1;
  for (int day : days) {
    for (int r = 0; r < records_per_day; ++r) {
      const int block_class = static_cast<int>(rng.uniform_int(n_classes));
      const int label = shuffle_labels
                            ? static_cast<int>(rng.uniform_int(n_classes))
                            : block_class;
      fpdb::FingerprintRecord rec;
      rec.record_id = id++;
      rec.day_index = day;
      rec.timestamp = epoch + static_cast<std::int64_t>(day - 1) * 86400 + 9 * 3600 + r;
      rec.device_id = "user";
      rec.rp_id = label;
      for (int j = 0; j < block; ++j) {
        rec.readings.push_back(fpdb::Reading{
            "ap_" + std::to_string(block_class * block + j),
            -40.0 - static_cast<double>(rng.uniform_int(3))});
      }
      records.push_back(std::move(rec));
    }
  }
  return fpdb::DynamicDatabase::from_parts(std::move(records), std::move(rps), epoch);
}

locmodels::DnnConfig small_dnn() {
  locmodels::DnnConfig cfg;
  cfg.sae_dim = 8;
  cfg.sae_mid = 6;
  cfg.hid_dim = 32;
  cfg.epochs_sae = 10;
  cfg.epochs_cls = 30;
  cfg.seed = 12345;
  return cfg;
}

}  // namespace

TEST_CASE("split validation") {
  CHECK_NOTHROW(SplitSpec{1, 24, 25, 44}.validate());
  CHECK_THROWS_AS((SplitSpec{5, 4, 6, 8}.validate()), Error);
  CHECK_THROWS_AS((SplitSpec{1, 10, 10, 12}.validate()), Error);  // overlap
  CHECK_THROWS_AS((SplitSpec{1, 10, 9, 8}.validate()), Error);
}

TEST_CASE("group averages chunk the series") {
  {
    std::vector<double> values(20);
    for (int i = 0; i < 20; ++i) values[i] = i + 1;
    auto groups = evalharness::group_averages(series_of(values), 5);
    REQUIRE(groups.size() == 4);
    CHECK(groups[0].mean == 3.0);
    CHECK(groups[1].mean == 8.0);
    CHECK(groups[2].mean == 13.0);
    CHECK(groups[3].mean == 18.0);
    for (const auto& g : groups) CHECK_FALSE(g.partial);
  }
  {
    auto groups = evalharness::group_averages(series_of({1, 2, 3, 4, 5, 6, 7}), 5);
    REQUIRE(groups.size() == 2);
    CHECK(groups[0].count == 5);
    CHECK_FALSE(groups[0].partial);
    CHECK(groups[1].count == 2);
    CHECK(groups[1].partial);
    CHECK(groups[1].mean == 6.5);
  }
  {
    auto groups = evalharness::group_averages(series_of({4, 9}), 1);
    REQUIRE(groups.size() == 2);
    CHECK(groups[0].mean == 4.0);
    CHECK(groups[1].mean == 9.0);
  }
  {
    auto groups = evalharness::group_averages(series_of(std::vector<double>(13, 2.5)), 5);
    for (const auto& g : groups) CHECK(g.mean == 2.5);  // exact
  }
}

TEST_CASE("trend fit delegates to the polynomial fitter") {
  {
    std::vector<double> values;
    for (int d = 0; d < 20; ++d) {
      const double x = d + 1;
      values.push_back(0.5 * x * x * x - 2.0 * x + 3.0);
    }
    auto coeffs = evalharness::trend_fit(series_of(values), 6);
    double worst = 0.0, scale = 0.0;
    for (int d = 0; d < 20; ++d) {
      const double x = d + 1;
      worst = std::max(worst, std::fabs(numerics::polyval(coeffs, x) - values[d]));
      scale = std::max(scale, std::fabs(values[d]));
    }
    CHECK(worst <= 1e-6 * scale);
  }
  {
    auto coeffs = evalharness::trend_fit(series_of(std::vector<double>(10, 7.0)), 3);
    CHECK(std::fabs(coeffs[0] - 7.0) <= 1e-9);
    for (std::size_t k = 1; k < coeffs.size(); ++k) CHECK(std::fabs(coeffs[k]) <= 1e-9);
  }
  CHECK_THROWS_AS(evalharness::trend_fit(series_of({1, 2, 3, 4, 5}), 6), Error);
}

TEST_CASE("dnn eval memorizes an identical test slice") {
  // same feature->label pairs on train and test days
  auto db = block_db(4, 3, 60, {1, 2, 3, 4}, false, 5);
  SplitSpec split{1, 2, 3, 4};
  auto report = evalharness::run_dnn_eval(db, split, small_dnn(), EvalOptions{2, 1});

  REQUIRE(report.per_day.size() == 2);
  for (const auto& d : report.per_day) {
    CHECK_FALSE(d.skipped);
    CHECK(d.metric == 1.0);
  }
  CHECK(report.model_hash_before == report.model_hash_after);
  CHECK(report.mean == 1.0);
}

TEST_CASE("dnn eval sits at chance level for shuffled labels") {
  auto db = block_db(5, 3, 120, {1, 2, 3, 4}, true, 11);
  SplitSpec split{1, 2, 3, 4};
  auto report = evalharness::run_dnn_eval(db, split, small_dnn(), EvalOptions{2, 1});

  // accuracy ~ 1/5 within 3 binomial sigmas on 240 test records
  const double p = 1.0 / 5.0;
  const double sigma = std::sqrt(p * (1 - p) / 240.0);
  CHECK(report.mean == doctest::Approx(p).epsilon(0).scale(0)
                           .epsilon(3 * sigma / p + 0.02));
  CHECK(std::fabs(report.mean - p) <= 3 * sigma + 0.02);
}

TEST_CASE("dnn eval excludes records at unseen rps") {
  // class 3 appears only on test days
  auto train_db = block_db(3, 3, 40, {1, 2}, false, 7);
  const std::int64_t epoch = train_db.epoch();
  std::vector<fpdb::FingerprintRecord> records(train_db.records().begin(),
                                               train_db.records().end());
  std::vector<fpdb::ReferencePoint> rps = train_db.rps();
  rps.push_back(fpdb::ReferencePoint{99, 50, 50, 0});
  std::int64_t id = 10000;
  for (int r = 0; r < 10; ++r) {
    fpdb::FingerprintRecord rec;
    rec.record_id = id++;
    rec.day_index = 3;
    rec.timestamp = epoch + 2 * 86400 + 9 * 3600 + r;
    rec.device_id = "user";
    rec.rp_id = 99;  // unseen in training
    rec.readings.push_back(fpdb::Reading{"ap_0", -45});
    records.push_back(std::move(rec));
  }
  // plus scorable records on day 3
  for (int r = 0; r < 30; ++r) {
    fpdb::FingerprintRecord rec;
    rec.record_id = id++;
    rec.day_index = 3;
    rec.timestamp = epoch + 2 * 86400 + 10 * 3600 + r;
    rec.device_id = "user";
    const int cls = r % 3;
    rec.rp_id = cls;
    for (int j = 0; j < 3; ++j)
      rec.readings.push_back(fpdb::Reading{"ap_" + std::to_string(cls * 3 + j), -41});
    records.push_back(std::move(rec));
  }
  auto db = fpdb::DynamicDatabase::from_parts(std::move(records), std::move(rps), epoch);

  SplitSpec split{1, 2, 3, 3};
  auto report = evalharness::run_dnn_eval(db, split, small_dnn(), EvalOptions{5, 1});
  REQUIRE(report.per_day.size() == 1);
  CHECK(report.per_day[0].n_excluded == 10);
  CHECK(report.per_day[0].n_records == 30);
  CHECK(report.metadata.at("excluded_records").get<int>() == 10);
}

TEST_CASE("empty slices are reported properly") {
  auto db = block_db(3, 3, 30, {1, 2, 4}, false, 9);  // day 3 missing
  SplitSpec split{1, 2, 3, 4};
  auto report = evalharness::run_dnn_eval(db, split, small_dnn(), EvalOptions{5, 1});
  REQUIRE(report.per_day.size() == 2);
  CHECK(report.per_day[0].skipped);  // day 3
  CHECK_FALSE(report.per_day[1].skipped);

  SplitSpec bad{5, 6, 7, 8};
  CHECK_THROWS_AS(evalharness::run_dnn_eval(db, bad, small_dnn(), EvalOptions{}),
                  Error);
}

TEST_CASE("gp eval produces non-negative errors and honors single-day limits") {
  auto cfg = synth::EnvironmentConfig{};
  cfg.floor_width = 9;
  cfg.floor_height = 6;
  cfg.n_fixed_aps = 6;
  cfg.shadow_sigma = 0.5;
  cfg.fast_sigma = 0.5;
  cfg.hotspot_rate = 0;
  cfg.p_fixed_fail_per_day = 0;
  cfg.device_offsets = {{"user", 0.0}};
  auto env = synth::build_environment(cfg, 3);
  auto db = synth::simulate(env, cfg, 8, 3);

  locmodels::GpConfig gp_cfg;
  gp_cfg.lengthscale = 60.0;
  SplitSpec split{1, 6, 7, 8};
  auto report = evalharness::run_gp_eval(db, split, gp_cfg, EvalOptions{5, 1});
  REQUIRE(report.per_day.size() == 2);
  for (const auto& d : report.per_day) {
    CHECK_FALSE(d.skipped);
    CHECK(d.metric >= 0.0);
    CHECK(std::isfinite(d.metric));
  }
  CHECK(report.model_hash_before == report.model_hash_after);

  // single test day: one group, trend refused for degree 6
  SplitSpec one_day{1, 6, 8, 8};
  auto single = evalharness::run_gp_eval(db, one_day, gp_cfg, EvalOptions{5, 6});
  REQUIRE(single.group_averages.size() == 1);
  CHECK(single.group_averages[0].mean == single.per_day[1 - 1].metric);
  CHECK_FALSE(single.trend_ok);
  CHECK(single.trend_error.find("InsufficientPoints") != std::string::npos);
}

TEST_CASE("drift makes gp errors grow against a paired control") {
  auto cfg = synth::EnvironmentConfig{};
  cfg.floor_width = 9;
  cfg.floor_height = 6;
  cfg.n_fixed_aps = 8;
  cfg.shadow_sigma = 0.5;
  cfg.shadow_rho = 0.5;
  cfg.fast_sigma = 0.5;
  cfg.hotspot_rate = 0;
  cfg.p_fixed_fail_per_day = 0;
  cfg.device_offsets = {{"user", 0.0}};
  cfg.daily_visits_per_rp = 2;

  auto drifted_cfg = cfg;
  drifted_cfg.env_trend_per_day = -0.8;

  locmodels::GpConfig gp_cfg;
  SplitSpec split{1, 8, 9, 14};
  auto control_db = synth::simulate(synth::build_environment(cfg, 17), cfg, 14, 17);
  auto drifted_db = synth::simulate(synth::build_environment(drifted_cfg, 17),
                                    drifted_cfg, 14, 17);
  auto control = evalharness::run_gp_eval(control_db, split, gp_cfg, EvalOptions{3, 1});
  auto drifted = evalharness::run_gp_eval(drifted_db, split, gp_cfg, EvalOptions{3, 1});

  CHECK(drifted.mean > control.mean);
  // late test days hurt more than early ones under drift
  CHECK(drifted.per_day.back().metric > drifted.per_day.front().metric);
}

TEST_CASE("reports are deterministic and round-trip through json") {
  auto db = block_db(3, 3, 30, {1, 2, 3}, false, 13);
  SplitSpec split{1, 2, 3, 3};
  auto a = evalharness::run_dnn_eval(db, split, small_dnn(), EvalOptions{5, 1});
  auto b = evalharness::run_dnn_eval(db, split, small_dnn(), EvalOptions{5, 1});
  CHECK(a.to_json().dump() == b.to_json().dump());

  auto restored = DriftReport::from_json(nlohmann::ordered_json::parse(a.to_json().dump()));
  CHECK(restored.to_json().dump() == a.to_json().dump());
}

TEST_CASE("report files render") {
  auto db = block_db(3, 3, 30, {1, 2, 3, 4, 5, 6, 7, 8, 9}, false, 19);
  SplitSpec split{1, 2, 3, 9};
  auto report = evalharness::run_dnn_eval(db, split, small_dnn(), EvalOptions{5, 6});

  const auto dir = std::filesystem::temp_directory_path() / "driftbench_eval_render";
  std::filesystem::create_directories(dir);
  evalharness::write_report_json(report, dir / "report.json");
  evalharness::write_per_day_csv(report, dir / "per_day.csv");
  evalharness::write_trend_csv(report, dir / "trend.csv");
  svg::write_drift_svg(report, dir / "drift.svg");

  const std::string chart = fsio::read_file(dir / "drift.svg");
  CHECK(chart.find("<svg") != std::string::npos);
  CHECK(chart.find("polyline") != std::string::npos);
  CHECK(chart.find("</svg>") != std::string::npos);
  const std::string csv = fsio::read_file(dir / "per_day.csv");
  CHECK(csv.rfind("day_index,metric\n", 0) == 0);
  std::filesystem::remove_all(dir);
}
