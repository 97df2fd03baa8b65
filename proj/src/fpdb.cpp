#include "driftbench/fpdb.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "driftbench/csv.hpp"
#include "driftbench/errors.hpp"
#include "driftbench/fsio.hpp"
#include "driftbench/stats.hpp"
#include "driftbench/timeutil.hpp"

namespace driftbench::fpdb {

struct DynamicDatabase::Storage {
  std::vector<FingerprintRecord> records;
  std::vector<ReferencePoint> rps;
  std::vector<ApId> ap_index;
  std::int64_t epoch = 0;
  std::unordered_map<std::string, std::size_t> ap_lookup;
  std::unordered_map<int, std::size_t> rp_lookup;
};

namespace {

bool valid_reading_level(double rssi) {
  return std::isfinite(rssi) && rssi >= kMinReading && rssi <= kMaxReading &&
         rssi == std::floor(rssi);
}

}  // namespace

DynamicDatabase DynamicDatabase::from_parts(std::vector<FingerprintRecord> records,
                                            std::vector<ReferencePoint> rps,
                                            std::int64_t epoch) {
  auto storage = std::make_shared<Storage>();
  storage->rps = std::move(rps);
  storage->epoch = epoch;

  for (std::size_t i = 0; i < storage->rps.size(); ++i) {
    const auto& rp = storage->rps[i];
    if (!std::isfinite(rp.x) || !std::isfinite(rp.y))
      throw Error(Errc::parse_error,
                  "rp " + std::to_string(rp.rp_id) + " has non-finite coordinates");
    if (!storage->rp_lookup.emplace(rp.rp_id, i).second)
      throw Error(Errc::parse_error, "duplicate rp_id " + std::to_string(rp.rp_id));
  }

  std::stable_sort(records.begin(), records.end(),
                   [](const FingerprintRecord& a, const FingerprintRecord& b) {
                     if (a.day_index != b.day_index) return a.day_index < b.day_index;
                     if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
                     return a.record_id < b.record_id;
                   });

  std::set<std::int64_t> seen_ids;
  for (const auto& rec : records) {
    if (!seen_ids.insert(rec.record_id).second)
      throw Error(Errc::parse_error,
                  "duplicate record_id " + std::to_string(rec.record_id));
    if (rec.day_index < 1)
      throw Error(Errc::parse_error, "record " + std::to_string(rec.record_id) +
                                         ": day_index must be >= 1");
    if (timeutil::day_start(rec.timestamp) !=
        epoch + static_cast<std::int64_t>(rec.day_index - 1) * 86400)
      throw Error(Errc::parse_error,
                  "record " + std::to_string(rec.record_id) +
                      ": day_index disagrees with timestamp under the epoch");
    if (!storage->rp_lookup.count(rec.rp_id))
      throw Error(Errc::foreign_key, "record " + std::to_string(rec.record_id) +
                                         " references unknown rp_id " +
                                         std::to_string(rec.rp_id));
    std::set<std::string_view> aps;
    for (const auto& reading : rec.readings) {
      if (reading.ap.empty())
        throw Error(Errc::parse_error,
                    "record " + std::to_string(rec.record_id) + ": empty ap id");
      if (!aps.insert(reading.ap).second)
        throw Error(Errc::parse_error, "record " + std::to_string(rec.record_id) +
                                           ": duplicate reading for " + reading.ap);
      if (!valid_reading_level(reading.rssi))
        throw Error(Errc::parse_error,
                    "record " + std::to_string(rec.record_id) + ": rssi " +
                        csvio::format_double(reading.rssi) +
                        " outside [-109, 0] integer range");
    }
  }

  for (const auto& rec : records) {
    for (const auto& reading : rec.readings) {
      if (storage->ap_lookup.emplace(reading.ap, storage->ap_index.size()).second)
        storage->ap_index.push_back(reading.ap);
    }
  }

  storage->records = std::move(records);
  DynamicDatabase db;
  db.first_ = 0;
  db.last_ = storage->records.size();
  db.storage_ = std::move(storage);
  return db;
}

std::span<const FingerprintRecord> DynamicDatabase::records() const {
  if (!storage_) return {};
  return std::span<const FingerprintRecord>(storage_->records)
      .subspan(first_, last_ - first_);
}

const std::vector<ReferencePoint>& DynamicDatabase::rps() const {
  static const std::vector<ReferencePoint> kEmpty;
  return storage_ ? storage_->rps : kEmpty;
}

const std::vector<ApId>& DynamicDatabase::ap_index() const {
  static const std::vector<ApId> kEmpty;
  return storage_ ? storage_->ap_index : kEmpty;
}

std::int64_t DynamicDatabase::epoch() const { return storage_ ? storage_->epoch : 0; }

int DynamicDatabase::min_day() const {
  if (empty()) throw Error(Errc::empty_database, "min_day of empty view");
  return records().front().day_index;
}

int DynamicDatabase::max_day() const {
  if (empty()) throw Error(Errc::empty_database, "max_day of empty view");
  return records().back().day_index;
}

bool DynamicDatabase::has_ap(const ApId& ap) const {
  return storage_ && storage_->ap_lookup.count(ap) > 0;
}

bool DynamicDatabase::has_rp(int rp_id) const {
  return storage_ && storage_->rp_lookup.count(rp_id) > 0;
}

const ReferencePoint& DynamicDatabase::rp(int rp_id) const {
  if (!storage_) throw Error(Errc::unknown_rp, "empty database");
  auto it = storage_->rp_lookup.find(rp_id);
  if (it == storage_->rp_lookup.end())
    throw Error(Errc::unknown_rp, "rp_id " + std::to_string(rp_id));
  return storage_->rps[it->second];
}

DynamicDatabase DynamicDatabase::slice_days(int first_day, int last_day) const {
  if (first_day > last_day)
    throw Error(Errc::invalid_range, "slice_days: first_day " +
                                         std::to_string(first_day) + " > last_day " +
                                         std::to_string(last_day));
  DynamicDatabase view = *this;
  if (!storage_) return view;
  const auto all = std::span<const FingerprintRecord>(storage_->records);
  const auto begin = all.begin() + static_cast<std::ptrdiff_t>(first_);
  const auto end = all.begin() + static_cast<std::ptrdiff_t>(last_);
  auto lo = std::lower_bound(begin, end, first_day,
                             [](const FingerprintRecord& r, int day) {
                               return r.day_index < day;
                             });
  auto hi = std::upper_bound(begin, end, last_day,
                             [](int day, const FingerprintRecord& r) {
                               return day < r.day_index;
                             });
  view.first_ = static_cast<std::size_t>(lo - all.begin());
  view.last_ = static_cast<std::size_t>(hi - all.begin());
  return view;
}

// ---------------------------------------------------------------------------
// Native CSV format

namespace {

const std::vector<std::string> kRecordsHeader = {"record_id", "timestamp",
                                                 "day_index", "device_id", "rp_id"};
const std::vector<std::string> kReadingsHeader = {"record_id", "ap_id", "rssi"};
const std::vector<std::string> kRpsHeader = {"rp_id", "x", "y", "floor"};

}  // namespace

DynamicDatabase load_native(const std::filesystem::path& records_csv,
                            const std::filesystem::path& readings_csv,
                            const std::filesystem::path& rps_csv) {
  const csvio::Table rps_table = csvio::read_csv(rps_csv);
  csvio::expect_header(rps_table, kRpsHeader, rps_csv);
  std::vector<ReferencePoint> rps;
  rps.reserve(rps_table.rows.size());
  for (const auto& row : rps_table.rows) {
    ReferencePoint rp;
    rp.rp_id = static_cast<int>(csvio::parse_int(row.fields[0], row.line_no, "rp_id"));
    rp.x = csvio::parse_double(row.fields[1], row.line_no, "x");
    rp.y = csvio::parse_double(row.fields[2], row.line_no, "y");
    rp.floor = static_cast<int>(csvio::parse_int(row.fields[3], row.line_no, "floor"));
    rps.push_back(rp);
  }

  const csvio::Table records_table = csvio::read_csv(records_csv);
  csvio::expect_header(records_table, kRecordsHeader, records_csv);
  std::vector<FingerprintRecord> records;
  records.reserve(records_table.rows.size());
  std::unordered_map<std::int64_t, std::size_t> record_pos;
  std::int64_t epoch = 0;
  bool have_epoch = false;
  for (const auto& row : records_table.rows) {
    FingerprintRecord rec;
    rec.record_id = csvio::parse_int(row.fields[0], row.line_no, "record_id");
    rec.timestamp = timeutil::parse_iso8601_utc(row.fields[1]);
    rec.day_index =
        static_cast<int>(csvio::parse_int(row.fields[2], row.line_no, "day_index"));
    rec.device_id = row.fields[3];
    rec.rp_id = static_cast<int>(csvio::parse_int(row.fields[4], row.line_no, "rp_id"));
    if (rec.day_index < 1)
      throw Error(Errc::parse_error,
                  "line " + std::to_string(row.line_no) + ": day_index must be >= 1");
    const std::int64_t derived_epoch =
        timeutil::day_start(rec.timestamp) -
        static_cast<std::int64_t>(rec.day_index - 1) * 86400;
    if (!have_epoch) {
      epoch = derived_epoch;
      have_epoch = true;
    } else if (derived_epoch != epoch) {
      throw Error(Errc::parse_error,
                  "line " + std::to_string(row.line_no) +
                      ": day_index/timestamp imply a different epoch date");
    }
    if (!record_pos.emplace(rec.record_id, records.size()).second)
      throw Error(Errc::parse_error, "line " + std::to_string(row.line_no) +
                                         ": duplicate record_id " +
                                         std::to_string(rec.record_id));
    records.push_back(std::move(rec));
  }

  const csvio::Table readings_table = csvio::read_csv(readings_csv);
  csvio::expect_header(readings_table, kReadingsHeader, readings_csv);
  for (const auto& row : readings_table.rows) {
    const std::int64_t record_id =
        csvio::parse_int(row.fields[0], row.line_no, "record_id");
    auto it = record_pos.find(record_id);
    if (it == record_pos.end())
      throw Error(Errc::foreign_key, "line " + std::to_string(row.line_no) +
                                         ": reading references unknown record " +
                                         std::to_string(record_id));
    const std::string& ap = row.fields[1];
    if (ap.empty())
      throw Error(Errc::parse_error,
                  "line " + std::to_string(row.line_no) + ": empty ap_id");
    const std::int64_t rssi = csvio::parse_int(row.fields[2], row.line_no, "rssi");
    if (rssi < static_cast<std::int64_t>(kMinReading) ||
        rssi > static_cast<std::int64_t>(kMaxReading))
      throw Error(Errc::parse_error, "line " + std::to_string(row.line_no) +
                                         ": rssi " + std::to_string(rssi) +
                                         " outside [-109, 0]");
    records[it->second].readings.push_back(
        Reading{ap, static_cast<double>(rssi)});
  }

  return DynamicDatabase::from_parts(std::move(records), std::move(rps), epoch);
}

void export_native(const DynamicDatabase& db,
                   const std::filesystem::path& records_csv,
                   const std::filesystem::path& readings_csv,
                   const std::filesystem::path& rps_csv) {
  std::ostringstream records_out, readings_out, rps_out;
  records_out << "record_id,timestamp,day_index,device_id,rp_id\n";
  readings_out << "record_id,ap_id,rssi\n";
  rps_out << "rp_id,x,y,floor\n";

  for (const auto& rp : db.rps()) {
    rps_out << rp.rp_id << ',' << csvio::format_double(rp.x) << ','
            << csvio::format_double(rp.y) << ',' << rp.floor << '\n';
  }
  for (const auto& rec : db.records()) {
    records_out << rec.record_id << ',' << timeutil::format_iso8601_utc(rec.timestamp)
                << ',' << rec.day_index << ',' << rec.device_id << ',' << rec.rp_id
                << '\n';
    for (const auto& reading : rec.readings) {
      readings_out << rec.record_id << ',' << reading.ap << ','
                   << static_cast<std::int64_t>(reading.rssi) << '\n';
    }
  }

  fsio::atomic_write_file(records_csv, records_out.str());
  fsio::atomic_write_file(readings_csv, readings_out.str());
  fsio::atomic_write_file(rps_csv, rps_out.str());
}

DynamicDatabase import_wide(const std::filesystem::path& path, int not_detected_code) {
  const csvio::Table table = csvio::read_csv(path);
  const auto& header = table.header;
  auto x_it = std::find(header.begin(), header.end(), "x");
  if (x_it == header.end() || x_it == header.begin())
    throw Error(Errc::parse_error,
                path.string() + ": wide header needs AP columns followed by x");
  const std::size_t n_aps = static_cast<std::size_t>(x_it - header.begin());
  if (header.size() != n_aps + 4 || header[n_aps + 1] != "y" ||
      header[n_aps + 2] != "floor" || header[n_aps + 3] != "timestamp")
    throw Error(Errc::parse_error,
                path.string() + ": wide header must end with x,y,floor,timestamp");
  if (table.rows.empty())
    throw Error(Errc::empty_database, path.string() + ": no data rows");

  auto parse_ts = [](const std::string& field, std::size_t line_no) -> std::int64_t {
    const bool numeric = !field.empty() &&
                         field.find_first_not_of("0123456789-") == std::string::npos &&
                         field.find('-', 1) == std::string::npos;
    if (numeric) return csvio::parse_int(field, line_no, "timestamp");
    return timeutil::parse_iso8601_utc(field);
  };

  struct WideRow {
    std::int64_t ts;
    double x, y;
    int floor;
    std::vector<Reading> readings;
  };
  std::vector<WideRow> parsed;
  parsed.reserve(table.rows.size());
  std::int64_t min_day_start = 0;
  for (const auto& row : table.rows) {
    WideRow out;
    for (std::size_t c = 0; c < n_aps; ++c) {
      const std::int64_t cell = csvio::parse_int(row.fields[c], row.line_no, "rssi");
      if (cell == not_detected_code) continue;
      if (cell < static_cast<std::int64_t>(kMinReading) ||
          cell > static_cast<std::int64_t>(kMaxReading))
        throw Error(Errc::parse_error, "line " + std::to_string(row.line_no) +
                                           ": rssi " + std::to_string(cell) +
                                           " outside [-109, 0]");
      out.readings.push_back(Reading{header[c], static_cast<double>(cell)});
    }
    out.x = csvio::parse_double(row.fields[n_aps], row.line_no, "x");
    out.y = csvio::parse_double(row.fields[n_aps + 1], row.line_no, "y");
    out.floor =
        static_cast<int>(csvio::parse_int(row.fields[n_aps + 2], row.line_no, "floor"));
    out.ts = parse_ts(row.fields[n_aps + 3], row.line_no);
    const std::int64_t ds = timeutil::day_start(out.ts);
    if (parsed.empty() || ds < min_day_start) min_day_start = ds;
    parsed.push_back(std::move(out));
  }

  std::vector<ReferencePoint> rps;
  std::vector<FingerprintRecord> records;
  records.reserve(parsed.size());
  auto rp_for = [&](double x, double y, int floor) -> int {
    for (const auto& rp : rps)
      if (rp.x == x && rp.y == y && rp.floor == floor) return rp.rp_id;
    const int id = static_cast<int>(rps.size());
    rps.push_back(ReferencePoint{id, x, y, floor});
    return id;
  };
  std::int64_t next_id = 1;
  for (auto& row : parsed) {
    FingerprintRecord rec;
    rec.record_id = next_id++;
    rec.timestamp = row.ts;
    rec.day_index =
        static_cast<int>((timeutil::day_start(row.ts) - min_day_start) / 86400) + 1;
    rec.device_id = "imported";
    rec.rp_id = rp_for(row.x, row.y, row.floor);
    rec.readings = std::move(row.readings);
    records.push_back(std::move(rec));
  }
  return DynamicDatabase::from_parts(std::move(records), std::move(rps),
                                     min_day_start);
}

// ---------------------------------------------------------------------------

RssiMatrix to_matrix(const DynamicDatabase& db, std::span<const ApId> ap_universe) {
  if (ap_universe.empty())
    throw Error(Errc::empty_input, "to_matrix: AP universe is empty");
  if (db.empty()) throw Error(Errc::empty_database, "to_matrix: no records in view");

  std::unordered_map<std::string_view, std::size_t> column;
  for (std::size_t j = 0; j < ap_universe.size(); ++j) column.emplace(ap_universe[j], j);

  const auto records = db.records();
  RssiMatrix out;
  out.matrix = numerics::Matrix(records.size(), ap_universe.size(), kNotDetected);
  out.row_labels.reserve(records.size());
  out.row_coords.reserve(records.size());
  out.row_days.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    for (const auto& reading : rec.readings) {
      auto it = column.find(reading.ap);
      if (it == column.end()) {
        ++out.dropped_readings;
        continue;
      }
      out.matrix(i, it->second) = reading.rssi;
    }
    const auto& rp = db.rp(rec.rp_id);
    out.row_labels.push_back(rec.rp_id);
    out.row_coords.emplace_back(rp.x, rp.y);
    out.row_days.push_back(rec.day_index);
  }
  return out;
}

std::vector<DaySeriesEntry> rssi_series(const DynamicDatabase& db, const ApId& ap,
                                        int rp_id, Aggregation aggregation) {
  if (!db.has_ap(ap)) throw Error(Errc::unknown_ap, ap);
  if (!db.has_rp(rp_id)) throw Error(Errc::unknown_rp, std::to_string(rp_id));

  // day -> (samples for this pair, number of records at the RP)
  std::vector<int> days;
  std::unordered_map<int, std::pair<std::vector<double>, std::size_t>> per_day;
  for (const auto& rec : db.records()) {
    auto [it, inserted] = per_day.try_emplace(rec.day_index);
    if (inserted) days.push_back(rec.day_index);
    if (rec.rp_id != rp_id) continue;
    it->second.second += 1;
    if (auto value = rec.reading(ap)) it->second.first.push_back(*value);
  }
  std::sort(days.begin(), days.end());

  std::vector<DaySeriesEntry> series;
  series.reserve(days.size());
  for (int day : days) {
    const auto& [samples, visits] = per_day[day];
    DaySeriesEntry entry;
    entry.day_index = day;
    if (!samples.empty()) {
      entry.mean = numerics::mean(samples);
      entry.stddev = std::sqrt(numerics::variance(samples));
      entry.min = *std::min_element(samples.begin(), samples.end());
      entry.max = *std::max_element(samples.begin(), samples.end());
      entry.detection_fraction =
          visits == 0 ? 0.0
                      : static_cast<double>(samples.size()) / static_cast<double>(visits);
    }
    if (aggregation == Aggregation::raw) entry.samples = samples;
    series.push_back(std::move(entry));
  }
  return series;
}

std::vector<ApId> aps_in_view(const DynamicDatabase& db) {
  std::vector<ApId> aps;
  std::unordered_map<std::string_view, bool> seen;
  for (const auto& rec : db.records()) {
    for (const auto& reading : rec.readings) {
      if (seen.emplace(reading.ap, true).second) aps.push_back(reading.ap);
    }
  }
  return aps;
}

}  // namespace driftbench::fpdb
