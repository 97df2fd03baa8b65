#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "driftbench/fpdb.hpp"

namespace driftbench::synth {

// Parametric radio environment for generating multi-day databases. Each knob
// realizes one drift cause: transient hotspots (with optionally ephemeral
// MACs), fixed-AP failure and replacement, periodic maintenance power shifts
// or sleeps, day-correlated shadowing, slow environment trends and seasonal
// cycles, per-device offsets, and fast per-sample noise.
//
// None of the default magnitudes is measured; they are order-of-magnitude
// choices for desk-scale experiments.
struct EnvironmentConfig {
  double floor_width = 12.0;   // meters
  double floor_height = 9.0;   // meters
  double rp_spacing = 3.0;     // meters between grid RPs
  int n_fixed_aps = 12;
  double tx_rssi0 = -40.0;     // level at the 1 m reference distance
  std::array<double, 2> path_loss_exponent_range = {1.8, 3.5};
  double shadow_sigma = 2.0;   // stationary std of day-level shadowing
  double shadow_rho = 0.8;     // AR(1) day-to-day correlation, in [0, 1)
  double fast_sigma = 1.5;     // per-sample noise std
  double detection_threshold = -95.0;  // quantized levels below this are dropped
  double hotspot_rate = 0.5;           // expected new hotspots per day (Poisson)
  double hotspot_lifetime_mean = 3.0;  // geometric mean lifetime, days
  double p_ephemeral_mac = 0.5;        // hotspot gets a fresh MAC every day
  double p_fixed_fail_per_day = 0.0;
  int replacement_delay_days = 3;      // negative disables replacement
  int maintenance_period = 0;          // every k days; 0 disables
  double maintenance_delta = 3.0;      // power shift magnitude
  double maintenance_fraction = 0.25;  // share of fixed APs touched per event
  double env_trend_per_day = 0.0;      // level units added per day index
  double env_season_amp = 0.0;
  double env_season_period = 7.0;      // days
  std::map<std::string, double> device_offsets = {{"anchor", 0.0}, {"user", 0.0}};
  std::vector<int> anchor_rp_ids;      // measured hourly (24x per day)
  int daily_visits_per_rp = 1;         // per user device
  std::string epoch_date = "2023-06-01";

  void validate() const;  // throws InvalidConfig naming the offending field

  static EnvironmentConfig from_json(const nlohmann::json& j);  // unknown keys error
  nlohmann::ordered_json to_json() const;
};

struct FixedAp {
  fpdb::ApId id;
  double x = 0.0, y = 0.0;
  double rssi0 = 0.0;
  double exponent = 2.0;
  int alive_from = 1;
  int alive_to = std::numeric_limits<int>::max();  // inclusive
  std::uint64_t noise_key = 0;
  std::vector<std::pair<int, double>> power_schedule;  // (from day, offset)
  std::vector<std::pair<int, int>> sleep_intervals;    // inclusive day ranges
};

struct Hotspot {
  fpdb::ApId stable_id;
  double x = 0.0, y = 0.0;
  double rssi0 = 0.0;
  double exponent = 2.0;
  int birth_day = 1;
  int death_day = 1;  // inclusive
  bool ephemeral = false;
  std::uint64_t noise_key = 0;
};

struct Environment {
  EnvironmentConfig config;
  std::uint64_t seed = 0;
  std::vector<fpdb::ReferencePoint> rps;
  std::vector<FixedAp> fixed_aps;
  std::vector<Hotspot> hotspots;  // filled while rolling the event timeline
  int next_ap_serial = 0;
  int next_hotspot_serial = 0;
};

// Grid RPs plus uniformly placed fixed APs; deterministic in (cfg, seed).
Environment build_environment(const EnvironmentConfig& cfg, std::uint64_t seed);

// Noise-free daily mean level of an AP at a position: log-distance path loss
// plus shadowing, maintenance offsets, linear trend and seasonal term.
// Throws UnknownAp for an id the environment does not know and ApNotAlive
// when the AP is dead or asleep on that day.
double mean_rssi(const Environment& env, const fpdb::ApId& ap, double x, double y,
                 int day);

// Rolls the per-day event timeline (maintenance, failures/replacements,
// hotspot births and deaths) onto a copy of the environment, then samples
// user visits and hourly anchor scans. Deterministic in (env, cfg, n_days,
// seed) and independent of scheduling.
fpdb::DynamicDatabase simulate(const Environment& env, const EnvironmentConfig& cfg,
                               int n_days, std::uint64_t seed);

// manifest.json: seed, config echo and output counts. When `reproducible`
// is set the wall-clock stamp is omitted so reruns are byte-identical.
void write_manifest(const std::filesystem::path& path, const EnvironmentConfig& cfg,
                    std::uint64_t seed, int n_days, const fpdb::DynamicDatabase& db,
                    bool reproducible);

}  // namespace driftbench::synth
