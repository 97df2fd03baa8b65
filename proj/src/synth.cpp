#include "driftbench/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "driftbench/errors.hpp"
#include "driftbench/fsio.hpp"
#include "driftbench/rng.hpp"
#include "driftbench/timeutil.hpp"

namespace driftbench::synth {

using numerics::RngStream;

namespace {

constexpr std::uint64_t kTagPlacement = 0x504c4143;  // placement draws
constexpr std::uint64_t kTagEvents = 0x45564e54;     // per-day event stream
constexpr std::uint64_t kTagSample = 0x53414d50;     // per-visit noise
constexpr std::uint64_t kTagShadow = 0x53484457;     // shadowing innovations

constexpr double kTau = 2.0 * 3.14159265358979323846;

void require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) throw Error(Errc::invalid_config, field + ": " + why);
}

}  // namespace

void EnvironmentConfig::validate() const {
  require(floor_width > 0, "floor_width", "must be positive");
  require(floor_height > 0, "floor_height", "must be positive");
  require(rp_spacing > 0, "rp_spacing", "must be positive");
  require(n_fixed_aps >= 0, "n_fixed_aps", "must be >= 0");
  require(std::isfinite(tx_rssi0) && tx_rssi0 <= 0, "tx_rssi0", "must be <= 0");
  require(path_loss_exponent_range[0] > 0 &&
              path_loss_exponent_range[0] <= path_loss_exponent_range[1],
          "path_loss_exponent_range", "must satisfy 0 < min <= max");
  require(shadow_sigma >= 0, "shadow_sigma", "must be >= 0");
  require(shadow_rho >= 0 && shadow_rho < 1, "shadow_rho", "must lie in [0, 1)");
  require(fast_sigma >= 0, "fast_sigma", "must be >= 0");
  require(detection_threshold >= -109 && detection_threshold <= 0,
          "detection_threshold", "must lie in [-109, 0]");
  require(hotspot_rate >= 0, "hotspot_rate", "must be >= 0");
  require(hotspot_lifetime_mean >= 1, "hotspot_lifetime_mean", "must be >= 1 day");
  require(p_ephemeral_mac >= 0 && p_ephemeral_mac <= 1, "p_ephemeral_mac",
          "must lie in [0, 1]");
  require(p_fixed_fail_per_day >= 0 && p_fixed_fail_per_day <= 1,
          "p_fixed_fail_per_day", "must lie in [0, 1]");
  require(maintenance_period >= 0, "maintenance_period", "must be >= 0");
  require(maintenance_delta >= 0, "maintenance_delta", "must be >= 0");
  require(maintenance_fraction >= 0 && maintenance_fraction <= 1,
          "maintenance_fraction", "must lie in [0, 1]");
  require(env_season_period > 0, "env_season_period", "must be positive");
  require(daily_visits_per_rp >= 0, "daily_visits_per_rp", "must be >= 0");
  for (const auto& [device, offset] : device_offsets)
    require(std::isfinite(offset), "device_offsets", device + " offset not finite");
  try {
    timeutil::parse_date_utc(epoch_date);
  } catch (const Error&) {
    throw Error(Errc::invalid_config, "epoch_date: expected YYYY-MM-DD, got '" +
                                          epoch_date + "'");
  }
}

EnvironmentConfig EnvironmentConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object())
    throw Error(Errc::invalid_config, "config root must be a JSON object");
  EnvironmentConfig cfg;

  auto num = [](const nlohmann::json& v, const char* key) -> double {
    if (!v.is_number())
      throw Error(Errc::invalid_config, std::string(key) + ": expected a number");
    return v.get<double>();
  };
  auto integer = [](const nlohmann::json& v, const char* key) -> int {
    if (!v.is_number_integer())
      throw Error(Errc::invalid_config, std::string(key) + ": expected an integer");
    return v.get<int>();
  };

  for (const auto& [key, value] : j.items()) {
    if (key == "floor_width") cfg.floor_width = num(value, key.c_str());
    else if (key == "floor_height") cfg.floor_height = num(value, key.c_str());
    else if (key == "rp_spacing") cfg.rp_spacing = num(value, key.c_str());
    else if (key == "n_fixed_aps") cfg.n_fixed_aps = integer(value, key.c_str());
    else if (key == "tx_rssi0") cfg.tx_rssi0 = num(value, key.c_str());
    else if (key == "path_loss_exponent_range") {
      if (!value.is_array() || value.size() != 2)
        throw Error(Errc::invalid_config,
                    "path_loss_exponent_range: expected [min, max]");
      cfg.path_loss_exponent_range = {num(value[0], key.c_str()),
                                      num(value[1], key.c_str())};
    } else if (key == "shadow_sigma") cfg.shadow_sigma = num(value, key.c_str());
    else if (key == "shadow_rho") cfg.shadow_rho = num(value, key.c_str());
    else if (key == "fast_sigma") cfg.fast_sigma = num(value, key.c_str());
    else if (key == "detection_threshold")
      cfg.detection_threshold = num(value, key.c_str());
    else if (key == "hotspot_rate") cfg.hotspot_rate = num(value, key.c_str());
    else if (key == "hotspot_lifetime_mean")
      cfg.hotspot_lifetime_mean = num(value, key.c_str());
    else if (key == "p_ephemeral_mac") cfg.p_ephemeral_mac = num(value, key.c_str());
    else if (key == "p_fixed_fail_per_day")
      cfg.p_fixed_fail_per_day = num(value, key.c_str());
    else if (key == "replacement_delay_days")
      cfg.replacement_delay_days = integer(value, key.c_str());
    else if (key == "maintenance_period")
      cfg.maintenance_period = integer(value, key.c_str());
    else if (key == "maintenance_delta")
      cfg.maintenance_delta = num(value, key.c_str());
    else if (key == "maintenance_fraction")
      cfg.maintenance_fraction = num(value, key.c_str());
    else if (key == "env_trend_per_day")
      cfg.env_trend_per_day = num(value, key.c_str());
    else if (key == "env_season_amp") cfg.env_season_amp = num(value, key.c_str());
    else if (key == "env_season_period")
      cfg.env_season_period = num(value, key.c_str());
    else if (key == "device_offsets") {
      if (!value.is_object())
        throw Error(Errc::invalid_config, "device_offsets: expected an object");
      cfg.device_offsets.clear();
      for (const auto& [device, offset] : value.items())
        cfg.device_offsets[device] = num(offset, "device_offsets");
    } else if (key == "anchor_rp_ids") {
      if (!value.is_array())
        throw Error(Errc::invalid_config, "anchor_rp_ids: expected an array");
      cfg.anchor_rp_ids.clear();
      for (const auto& id : value)
        cfg.anchor_rp_ids.push_back(integer(id, "anchor_rp_ids"));
    } else if (key == "daily_visits_per_rp")
      cfg.daily_visits_per_rp = integer(value, key.c_str());
    else if (key == "epoch_date") {
      if (!value.is_string())
        throw Error(Errc::invalid_config, "epoch_date: expected a string");
      cfg.epoch_date = value.get<std::string>();
    } else {
      throw Error(Errc::invalid_config, "unknown config key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

nlohmann::ordered_json EnvironmentConfig::to_json() const {
  nlohmann::ordered_json j;
  j["floor_width"] = floor_width;
  j["floor_height"] = floor_height;
  j["rp_spacing"] = rp_spacing;
  j["n_fixed_aps"] = n_fixed_aps;
  j["tx_rssi0"] = tx_rssi0;
  j["path_loss_exponent_range"] = path_loss_exponent_range;
  j["shadow_sigma"] = shadow_sigma;
  j["shadow_rho"] = shadow_rho;
  j["fast_sigma"] = fast_sigma;
  j["detection_threshold"] = detection_threshold;
  j["hotspot_rate"] = hotspot_rate;
  j["hotspot_lifetime_mean"] = hotspot_lifetime_mean;
  j["p_ephemeral_mac"] = p_ephemeral_mac;
  j["p_fixed_fail_per_day"] = p_fixed_fail_per_day;
  j["replacement_delay_days"] = replacement_delay_days;
  j["maintenance_period"] = maintenance_period;
  j["maintenance_delta"] = maintenance_delta;
  j["maintenance_fraction"] = maintenance_fraction;
  j["env_trend_per_day"] = env_trend_per_day;
  j["env_season_amp"] = env_season_amp;
  j["env_season_period"] = env_season_period;
  j["device_offsets"] = device_offsets;
  j["anchor_rp_ids"] = anchor_rp_ids;
  j["daily_visits_per_rp"] = daily_visits_per_rp;
  j["epoch_date"] = epoch_date;
  return j;
}

Environment build_environment(const EnvironmentConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Environment env;
  env.config = cfg;
  env.seed = seed;

  const int nx = static_cast<int>(std::floor(cfg.floor_width / cfg.rp_spacing)) + 1;
  const int ny = static_cast<int>(std::floor(cfg.floor_height / cfg.rp_spacing)) + 1;
  env.rps.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      fpdb::ReferencePoint rp;
      rp.rp_id = j * nx + i;
      rp.x = i * cfg.rp_spacing;
      rp.y = j * cfg.rp_spacing;
      rp.floor = 0;
      env.rps.push_back(rp);
    }
  }

  RngStream place(RngStream::mix(seed, kTagPlacement), 0);
  env.fixed_aps.reserve(cfg.n_fixed_aps);
  for (int k = 0; k < cfg.n_fixed_aps; ++k) {
    FixedAp ap;
    ap.id = "ap_" + std::to_string(k);
    ap.x = place.uniform(0.0, cfg.floor_width);
    ap.y = place.uniform(0.0, cfg.floor_height);
    ap.rssi0 = cfg.tx_rssi0;
    ap.exponent =
        place.uniform(cfg.path_loss_exponent_range[0], cfg.path_loss_exponent_range[1]);
    ap.noise_key = place.next_u64();
    env.fixed_aps.push_back(std::move(ap));
  }
  env.next_ap_serial = cfg.n_fixed_aps;
  env.next_hotspot_serial = 0;
  return env;
}

namespace {

bool fixed_alive(const FixedAp& ap, int day) {
  if (day < ap.alive_from || day > ap.alive_to) return false;
  for (const auto& [from, to] : ap.sleep_intervals)
    if (day >= from && day <= to) return false;
  return true;
}

bool hotspot_alive(const Hotspot& h, int day) {
  return day >= h.birth_day && day <= h.death_day;
}

double maintenance_offset(const FixedAp& ap, int day) {
  double offset = 0.0;
  for (const auto& [from, value] : ap.power_schedule) {
    if (from > day) break;
    offset = value;
  }
  return offset;
}

int nearest_rp_id(const Environment& env, double x, double y) {
  int best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (const auto& rp : env.rps) {
    const double dx = rp.x - x, dy = rp.y - y;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best_d2) {
      best_d2 = d2;
      best = rp.rp_id;
    }
  }
  return best;
}

// AR(1) day-level shadowing with stationary std shadow_sigma, reconstructed
// from counter-keyed innovations so the value depends only on
// (seed, ap, rp, day), never on evaluation order.
double shadow_value(const Environment& env, std::uint64_t noise_key, int rp_id,
                    int day) {
  const auto& cfg = env.config;
  if (cfg.shadow_sigma == 0.0) return 0.0;
  const std::uint64_t stream_seed =
      RngStream::mix(RngStream::mix(env.seed, kTagShadow), noise_key);
  double s = 0.0;
  const double innovation_scale =
      cfg.shadow_sigma * std::sqrt(1.0 - cfg.shadow_rho * cfg.shadow_rho);
  for (int d = 1; d <= day; ++d) {
    RngStream rng(stream_seed, RngStream::mix(static_cast<std::uint64_t>(rp_id), d));
    const double eps = rng.normal();
    s = (d == 1) ? cfg.shadow_sigma * eps : cfg.shadow_rho * s + innovation_scale * eps;
  }
  return s;
}

double mean_level(const Environment& env, double ap_x, double ap_y, double rssi0,
                  double exponent, std::uint64_t noise_key, double maint, double x,
                  double y, int day) {
  const auto& cfg = env.config;
  const double d = std::hypot(ap_x - x, ap_y - y);
  const double path_loss = 10.0 * exponent * std::log10(std::max(d, 1.0));
  const double season =
      cfg.env_season_amp == 0.0
          ? 0.0
          : cfg.env_season_amp * std::sin(kTau * day / cfg.env_season_period);
  return rssi0 - path_loss + shadow_value(env, noise_key, nearest_rp_id(env, x, y), day) +
         maint + cfg.env_trend_per_day * day + season;
}

double mean_level_fixed(const Environment& env, const FixedAp& ap, double x, double y,
                        int day) {
  return mean_level(env, ap.x, ap.y, ap.rssi0, ap.exponent, ap.noise_key,
                    maintenance_offset(ap, day), x, y, day);
}

double mean_level_hotspot(const Environment& env, const Hotspot& h, double x, double y,
                          int day) {
  return mean_level(env, h.x, h.y, h.rssi0, h.exponent, h.noise_key, 0.0, x, y, day);
}

}  // namespace

double mean_rssi(const Environment& env, const fpdb::ApId& ap, double x, double y,
                 int day) {
  for (const auto& fixed : env.fixed_aps) {
    if (fixed.id != ap) continue;
    if (!fixed_alive(fixed, day))
      throw Error(Errc::ap_not_alive,
                  ap + " is not alive on day " + std::to_string(day));
    return mean_level_fixed(env, fixed, x, y, day);
  }
  for (const auto& h : env.hotspots) {
    if (h.stable_id != ap) continue;
    if (!hotspot_alive(h, day))
      throw Error(Errc::ap_not_alive,
                  ap + " is not alive on day " + std::to_string(day));
    return mean_level_hotspot(env, h, x, y, day);
  }
  throw Error(Errc::unknown_ap, ap);
}

fpdb::DynamicDatabase simulate(const Environment& env, const EnvironmentConfig& cfg,
                               int n_days, std::uint64_t seed) {
  cfg.validate();
  if (n_days < 1) throw Error(Errc::invalid_config, "n_days: must be >= 1");

  Environment world = env;
  const std::int64_t epoch = timeutil::parse_date_utc(cfg.epoch_date);

  std::vector<int> anchor_rps = cfg.anchor_rp_ids;
  std::sort(anchor_rps.begin(), anchor_rps.end());
  for (int rp_id : anchor_rps) {
    const bool known = std::any_of(world.rps.begin(), world.rps.end(),
                                   [&](const auto& rp) { return rp.rp_id == rp_id; });
    if (!known)
      throw Error(Errc::invalid_config,
                  "anchor_rp_ids: rp " + std::to_string(rp_id) + " is not on the grid");
  }
  if (!anchor_rps.empty() && !cfg.device_offsets.count("anchor"))
    throw Error(Errc::invalid_config,
                "device_offsets: anchors configured but no 'anchor' device offset");

  std::vector<std::string> user_devices;
  for (const auto& [device, offset] : cfg.device_offsets) {
    (void)offset;
    if (device != "anchor") user_devices.push_back(device);
  }

  // Event timeline. Fixed per-day order: maintenance, then failures and
  // replacement scheduling, then hotspot births (deaths are implicit in the
  // lifetime drawn at birth).
  for (int day = 1; day <= n_days; ++day) {
    RngStream events(RngStream::mix(seed, kTagEvents), static_cast<std::uint64_t>(day));

    if (cfg.maintenance_period > 0 && day % cfg.maintenance_period == 0) {
      const std::size_t managed = world.fixed_aps.size();
      for (std::size_t i = 0; i < managed; ++i) {
        FixedAp& ap = world.fixed_aps[i];
        if (!fixed_alive(ap, day)) continue;
        if (events.next_double() >= cfg.maintenance_fraction) continue;
        switch (events.uniform_int(3)) {
          case 0:
          case 1: {
            const double sign = events.next_double() < 0.5 ? 1.0 : -1.0;
            const double current =
                ap.power_schedule.empty() ? 0.0 : ap.power_schedule.back().second;
            ap.power_schedule.emplace_back(day, current + sign * cfg.maintenance_delta);
            break;
          }
          case 2:
            ap.sleep_intervals.emplace_back(day, day + cfg.maintenance_period - 1);
            break;
        }
      }
    }

    if (cfg.p_fixed_fail_per_day > 0) {
      const std::size_t present = world.fixed_aps.size();
      for (std::size_t i = 0; i < present; ++i) {
        FixedAp& ap = world.fixed_aps[i];
        if (day < ap.alive_from || day > ap.alive_to) continue;
        if (events.next_double() >= cfg.p_fixed_fail_per_day) continue;
        ap.alive_to = day - 1;
        if (cfg.replacement_delay_days >= 0) {
          FixedAp replacement;
          replacement.id = "ap_" + std::to_string(world.next_ap_serial++);
          replacement.x = ap.x;
          replacement.y = ap.y;
          replacement.rssi0 = cfg.tx_rssi0;
          replacement.exponent = events.uniform(cfg.path_loss_exponent_range[0],
                                                cfg.path_loss_exponent_range[1]);
          replacement.alive_from = day + cfg.replacement_delay_days;
          replacement.noise_key = events.next_u64();
          world.fixed_aps.push_back(std::move(replacement));
        }
      }
    }

    const int births = events.poisson(cfg.hotspot_rate);
    for (int b = 0; b < births; ++b) {
      Hotspot h;
      h.stable_id = "hs_" + std::to_string(world.next_hotspot_serial++);
      h.x = events.uniform(0.0, cfg.floor_width);
      h.y = events.uniform(0.0, cfg.floor_height);
      h.rssi0 = cfg.tx_rssi0;
      h.exponent = events.uniform(cfg.path_loss_exponent_range[0],
                                  cfg.path_loss_exponent_range[1]);
      h.birth_day = day;
      h.death_day = day + events.geometric(1.0 / cfg.hotspot_lifetime_mean) - 1;
      h.ephemeral = events.next_double() < cfg.p_ephemeral_mac;
      h.noise_key = events.next_u64();
      world.hotspots.push_back(std::move(h));
    }
  }

  // Sampling. Every visit owns a stream keyed by (day, visit ordinal), so
  // per-day generation could run on any schedule without changing a bit.
  struct Visit {
    const fpdb::ReferencePoint* rp;
    const std::string* device;
    std::int64_t ts;
  };
  std::vector<fpdb::FingerprintRecord> records;
  for (int day = 1; day <= n_days; ++day) {
    const std::int64_t midnight = epoch + static_cast<std::int64_t>(day - 1) * 86400;
    std::vector<Visit> visits;
    static const std::string kAnchorDevice = "anchor";
    for (int rp_id : anchor_rps) {
      const auto& rp = *std::find_if(world.rps.begin(), world.rps.end(),
                                     [&](const auto& r) { return r.rp_id == rp_id; });
      for (int hour = 0; hour < 24; ++hour)
        visits.push_back(Visit{&rp, &kAnchorDevice, midnight + hour * 3600});
    }
    for (const auto& rp : world.rps) {
      for (const auto& device : user_devices) {
        for (int v = 0; v < cfg.daily_visits_per_rp; ++v)
          visits.push_back(Visit{&rp, &device, midnight + 9 * 3600 + v * 1800});
      }
    }

    std::vector<fpdb::FingerprintRecord> day_records;
    day_records.reserve(visits.size());
    for (std::size_t ordinal = 0; ordinal < visits.size(); ++ordinal) {
      const Visit& visit = visits[ordinal];
      RngStream noise(RngStream::mix(seed, kTagSample, static_cast<std::uint64_t>(day)),
                      ordinal);
      const double device_offset = cfg.device_offsets.at(*visit.device);
      fpdb::FingerprintRecord rec;
      rec.timestamp = visit.ts;
      rec.day_index = day;
      rec.device_id = *visit.device;
      rec.rp_id = visit.rp->rp_id;

      auto sample_ap = [&](double mean, const fpdb::ApId& id) {
        const double level =
            std::round(mean + cfg.fast_sigma * noise.normal() + device_offset);
        if (level >= cfg.detection_threshold)
          rec.readings.push_back(fpdb::Reading{id, std::min(level, 0.0)});
      };
      for (const auto& ap : world.fixed_aps) {
        if (!fixed_alive(ap, day)) continue;
        sample_ap(mean_level_fixed(world, ap, visit.rp->x, visit.rp->y, day), ap.id);
      }
      for (const auto& h : world.hotspots) {
        if (!hotspot_alive(h, day)) continue;
        const fpdb::ApId id =
            h.ephemeral ? h.stable_id + "_d" + std::to_string(day) : h.stable_id;
        sample_ap(mean_level_hotspot(world, h, visit.rp->x, visit.rp->y, day), id);
      }
      day_records.push_back(std::move(rec));
    }
    std::stable_sort(day_records.begin(), day_records.end(),
                     [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
    for (auto& rec : day_records) records.push_back(std::move(rec));
  }

  std::int64_t next_id = 1;
  for (auto& rec : records) rec.record_id = next_id++;

  return fpdb::DynamicDatabase::from_parts(std::move(records), world.rps, epoch);
}

void write_manifest(const std::filesystem::path& path, const EnvironmentConfig& cfg,
                    std::uint64_t seed, int n_days, const fpdb::DynamicDatabase& db,
                    bool reproducible) {
  std::size_t readings = 0;
  std::set<int> days;
  for (const auto& rec : db.records()) {
    readings += rec.readings.size();
    days.insert(rec.day_index);
  }
  nlohmann::ordered_json j;
  j["tool"] = "driftbench";
  j["version"] = "0.1.0";
  j["seed"] = seed;
  j["n_days"] = n_days;
  j["config"] = cfg.to_json();
  j["counts"] = {{"records", db.record_count()},
                 {"readings", readings},
                 {"aps", db.ap_index().size()},
                 {"rps", db.rps().size()},
                 {"days_with_records", days.size()}};
  if (!reproducible) {
    j["generated_at"] = timeutil::format_iso8601_utc(static_cast<std::int64_t>(
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count()));
  }
  fsio::atomic_write_file(path, j.dump(2) + "\n");
}

}  // namespace driftbench::synth
