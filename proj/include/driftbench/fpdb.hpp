#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "driftbench/matrix.hpp"

namespace driftbench::fpdb {

using ApId = std::string;

// Matrix cells use this level for "AP not detected"; it is never a stored
// reading, which keeps detections and absences distinguishable everywhere.
inline constexpr double kNotDetected = -110.0;
inline constexpr double kMinReading = -109.0;
inline constexpr double kMaxReading = 0.0;

struct ReferencePoint {
  int rp_id = 0;
  double x = 0.0;  // meters, local frame
  double y = 0.0;
  int floor = 0;
};

struct Reading {
  ApId ap;
  double rssi;  // integer-valued level in [-109, 0]
};

struct FingerprintRecord {
  std::int64_t record_id = 0;
  std::int64_t timestamp = 0;  // seconds since Unix epoch, UTC
  int day_index = 1;           // 1-based, derived from the calendar date
  std::string device_id;
  int rp_id = 0;
  std::vector<Reading> readings;  // insertion order kept; one entry per AP

  std::optional<double> reading(const ApId& ap) const {
    for (const auto& r : readings)
      if (r.ap == ap) return r.rssi;
    return std::nullopt;
  }
};

// Record collection plus AP/RP indices. Slicing returns views that share the
// immutable storage, so day slices are cheap and safe to read concurrently.
class DynamicDatabase {
 public:
  DynamicDatabase() = default;

  // Sorts records by (day_index, timestamp, record_id), derives the AP index
  // in first-seen order and validates every invariant.
  static DynamicDatabase from_parts(std::vector<FingerprintRecord> records,
                                    std::vector<ReferencePoint> rps,
                                    std::int64_t epoch);

  std::span<const FingerprintRecord> records() const;
  const std::vector<ReferencePoint>& rps() const;
  const std::vector<ApId>& ap_index() const;
  std::int64_t epoch() const;

  bool empty() const { return last_ == first_; }
  std::size_t record_count() const { return last_ - first_; }
  int min_day() const;  // of this view; throws EmptyDatabase when empty
  int max_day() const;

  bool has_ap(const ApId& ap) const;
  bool has_rp(int rp_id) const;
  const ReferencePoint& rp(int rp_id) const;

  // View of records with first_day <= day_index <= last_day. The parent's
  // AP index and RP list carry over unchanged.
  DynamicDatabase slice_days(int first_day, int last_day) const;

 private:
  struct Storage;
  std::shared_ptr<const Storage> storage_;
  std::size_t first_ = 0;
  std::size_t last_ = 0;
};

struct RssiMatrix {
  numerics::Matrix matrix;  // rows = records, cols = AP universe
  std::vector<int> row_labels;                    // rp_id per row
  std::vector<std::pair<double, double>> row_coords;  // (x, y) meters per row
  std::vector<int> row_days;
  std::size_t dropped_readings = 0;  // readings outside the given universe
};

enum class Aggregation { mean, raw, stats };

struct DaySeriesEntry {
  int day_index = 0;
  double mean = kNotDetected;
  double stddev = 0.0;
  double min = kNotDetected;
  double max = kNotDetected;
  double detection_fraction = 0.0;
  std::vector<double> samples;  // filled for Aggregation::raw
};

DynamicDatabase load_native(const std::filesystem::path& records_csv,
                            const std::filesystem::path& readings_csv,
                            const std::filesystem::path& rps_csv);

void export_native(const DynamicDatabase& db,
                   const std::filesystem::path& records_csv,
                   const std::filesystem::path& readings_csv,
                   const std::filesystem::path& rps_csv);

// Wide single-file import: AP columns first, then x,y,floor,timestamp.
// Cells equal to `not_detected_code` become absences. Timestamps may be
// Unix seconds or ISO-8601; day 1 is the earliest date present.
DynamicDatabase import_wide(const std::filesystem::path& path, int not_detected_code);

RssiMatrix to_matrix(const DynamicDatabase& db, std::span<const ApId> ap_universe);

// Per-day series for one (AP, RP) pair. Every day present in the view is
// emitted; days without detections carry the -110 sentinel and detection
// fraction 0.
std::vector<DaySeriesEntry> rssi_series(const DynamicDatabase& db, const ApId& ap,
                                        int rp_id, Aggregation aggregation);

// APs appearing in the view's records, in first-seen order. Used to freeze
// a model's AP universe from a training slice.
std::vector<ApId> aps_in_view(const DynamicDatabase& db);

}  // namespace driftbench::fpdb
