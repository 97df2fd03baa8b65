#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "driftbench/errors.hpp"
#include "driftbench/fpdb.hpp"
#include "driftbench/stats.hpp"
#include "driftbench/synth.hpp"

using namespace driftbench;
using synth::EnvironmentConfig;

namespace {

EnvironmentConfig quiet_config() {
  EnvironmentConfig cfg;
  cfg.floor_width = 12;
  cfg.floor_height = 9;
  cfg.rp_spacing = 3;
  cfg.n_fixed_aps = 4;
  cfg.shadow_sigma = 0;
  cfg.fast_sigma = 0;
  cfg.hotspot_rate = 0;
  cfg.p_fixed_fail_per_day = 0;
  cfg.maintenance_period = 0;
  cfg.env_trend_per_day = 0;
  cfg.env_season_amp = 0;
  cfg.detection_threshold = -109;
  cfg.device_offsets = {{"user", 0.0}};
  cfg.daily_visits_per_rp = 1;
  return cfg;
}

std::string db_fingerprint(const fpdb::DynamicDatabase& db) {
  std::string out;
  for (const auto& rec : db.records()) {
    out += std::to_string(rec.record_id) + "|" + std::to_string(rec.timestamp) + "|" +
           rec.device_id + "|" + std::to_string(rec.rp_id);
    for (const auto& r : rec.readings)
      out += ";" + r.ap + "=" + std::to_string(r.rssi);
    out += "\n";
  }
  return out;
}

}  // namespace

TEST_CASE("build_environment lays out the rp grid") {
  auto cfg = quiet_config();
  auto env = synth::build_environment(cfg, 1);
  CHECK(env.rps.size() == 20);  // 5 x 4 on a 12 x 9 floor at 3 m spacing
  CHECK(env.fixed_aps.size() == 4);

  cfg.n_fixed_aps = 0;
  auto env2 = synth::build_environment(cfg, 1);
  CHECK(env2.fixed_aps.empty());

  auto env3 = synth::build_environment(quiet_config(), 1);
  CHECK(env3.fixed_aps[2].x == env.fixed_aps[2].x);
  CHECK(env3.fixed_aps[2].noise_key == env.fixed_aps[2].noise_key);

  cfg.rp_spacing = -1;
  CHECK_THROWS_AS(synth::build_environment(cfg, 1), Error);
}

TEST_CASE("mean_rssi follows log-distance path loss") {
  auto cfg = quiet_config();
  cfg.n_fixed_aps = 1;
  auto env = synth::build_environment(cfg, 7);
  auto& ap = env.fixed_aps[0];
  ap.x = 0;
  ap.y = 0;
  ap.rssi0 = -40;
  ap.exponent = 2.0;

  CHECK(synth::mean_rssi(env, "ap_0", 0, 0, 1) == doctest::Approx(-40.0));
  CHECK(synth::mean_rssi(env, "ap_0", 10, 0, 1) == doctest::Approx(-60.0));

  // seasonal term is periodic when the trend is off
  env.config.env_season_amp = 4;
  env.config.env_season_period = 7;
  const double day2 = synth::mean_rssi(env, "ap_0", 5, 5, 2);
  const double day9 = synth::mean_rssi(env, "ap_0", 5, 5, 9);
  CHECK(day2 == doctest::Approx(day9).epsilon(1e-12));

  CHECK_THROWS_AS(synth::mean_rssi(env, "nope", 0, 0, 1), Error);
  ap.alive_to = 3;
  CHECK_THROWS_AS(synth::mean_rssi(env, "ap_0", 0, 0, 4), Error);
}

TEST_CASE("monotone drift knob widens the day gap") {
  auto base = quiet_config();
  base.n_fixed_aps = 3;
  double previous_gap = -1.0;
  for (double trend : {0.0, 0.2, 0.5, 1.0}) {
    auto cfg = base;
    cfg.env_trend_per_day = trend;
    auto env = synth::build_environment(cfg, 11);
    double gap = 0.0;
    for (const auto& ap : env.fixed_aps) {
      const double d1 = synth::mean_rssi(env, ap.id, 6.0, 4.5, 1);
      const double dn = synth::mean_rssi(env, ap.id, 6.0, 4.5, 30);
      gap += dn - d1;
    }
    CHECK(gap > previous_gap);
    previous_gap = gap;
  }
}

TEST_CASE("simulate is deterministic and respects the threshold") {
  auto cfg = quiet_config();
  cfg.fast_sigma = 2.0;
  cfg.shadow_sigma = 1.5;
  cfg.hotspot_rate = 0.7;
  cfg.detection_threshold = -90;
  auto env = synth::build_environment(cfg, 42);
  auto db1 = synth::simulate(env, cfg, 10, 42);
  auto db2 = synth::simulate(env, cfg, 10, 42);
  CHECK(db_fingerprint(db1) == db_fingerprint(db2));
  CHECK(db1.record_count() > 0);

  for (const auto& rec : db1.records()) {
    for (const auto& r : rec.readings) {
      CHECK(r.rssi >= -90.0);
      CHECK(r.rssi <= 0.0);
    }
  }

  auto db3 = synth::simulate(env, cfg, 10, 43);
  CHECK(db_fingerprint(db1) != db_fingerprint(db3));
}

TEST_CASE("zero-noise config repeats the same readings every day") {
  auto cfg = quiet_config();
  auto env = synth::build_environment(cfg, 5);
  auto db = synth::simulate(env, cfg, 6, 5);
  REQUIRE(db.record_count() == 6 * 20);

  // per (ap, rp) daily variance is exactly zero
  for (const auto& ap : db.ap_index()) {
    for (const auto& rp : db.rps()) {
      auto series = fpdb::rssi_series(db, ap, rp.rp_id, fpdb::Aggregation::raw);
      std::vector<double> all;
      for (const auto& day : series)
        for (double v : day.samples) all.push_back(v);
      if (all.size() > 1) CHECK(numerics::variance(all) == 0.0);
    }
  }
}

TEST_CASE("impossible threshold yields an empty-reading database") {
  auto cfg = quiet_config();
  cfg.detection_threshold = -10;
  auto env = synth::build_environment(cfg, 3);
  auto db = synth::simulate(env, cfg, 3, 3);
  for (const auto& rec : db.records()) CHECK(rec.readings.empty());
  CHECK(db.ap_index().empty());
}

TEST_CASE("ephemeral hotspots change mac every day") {
  auto cfg = quiet_config();
  cfg.n_fixed_aps = 0;
  cfg.hotspot_rate = 3.0;           // ensure at least one birth on day 1
  cfg.hotspot_lifetime_mean = 1000;  // effectively immortal
  cfg.p_ephemeral_mac = 1.0;
  cfg.detection_threshold = -109;
  auto env = synth::build_environment(cfg, 9);
  auto db = synth::simulate(env, cfg, 3, 9);

  std::map<std::string, std::set<int>> days_by_ap;
  for (const auto& rec : db.records())
    for (const auto& r : rec.readings) days_by_ap[r.ap].insert(rec.day_index);
  REQUIRE(!days_by_ap.empty());
  for (const auto& [ap, days] : days_by_ap) {
    CAPTURE(ap);
    CHECK(days.size() == 1);  // each ephemeral MAC appears on exactly one day
  }
}

TEST_CASE("fixed ap count never grows without hotspots or replacement") {
  auto cfg = quiet_config();
  cfg.n_fixed_aps = 6;
  cfg.p_fixed_fail_per_day = 0.3;
  cfg.replacement_delay_days = -1;  // disabled
  cfg.hotspot_rate = 0;
  auto env = synth::build_environment(cfg, 21);
  auto db = synth::simulate(env, cfg, 12, 21);

  std::map<int, std::set<std::string>> aps_by_day;
  for (const auto& rec : db.records())
    for (const auto& r : rec.readings) aps_by_day[rec.day_index].insert(r.ap);
  std::size_t previous = 6;
  for (const auto& [day, aps] : aps_by_day) {
    CHECK(aps.size() <= previous);
    previous = aps.size();
  }
}

TEST_CASE("anchors add hourly records") {
  auto cfg = quiet_config();
  cfg.anchor_rp_ids = {0, 7};
  cfg.device_offsets = {{"anchor", 0.0}, {"user", 0.0}};
  auto env = synth::build_environment(cfg, 2);
  auto db = synth::simulate(env, cfg, 2, 2);
  // 20 user visits + 2*24 anchor scans per day
  CHECK(db.record_count() == 2 * (20 + 48));

  cfg.anchor_rp_ids = {999};
  CHECK_THROWS_AS(synth::simulate(env, cfg, 2, 2), Error);
}

TEST_CASE("config json round-trip is strict about keys") {
  auto cfg = quiet_config();
  cfg.anchor_rp_ids = {1, 2};
  auto parsed = EnvironmentConfig::from_json(nlohmann::json::parse(cfg.to_json().dump()));
  CHECK(parsed.to_json() == cfg.to_json());

  auto j = cfg.to_json();
  j["no_such_knob"] = 1;
  CHECK_THROWS_AS(EnvironmentConfig::from_json(nlohmann::json::parse(j.dump())), Error);

  auto bad = cfg.to_json();
  bad["shadow_rho"] = 1.5;
  CHECK_THROWS_AS(EnvironmentConfig::from_json(nlohmann::json::parse(bad.dump())), Error);
}
