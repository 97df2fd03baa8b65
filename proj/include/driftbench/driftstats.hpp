#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "driftbench/fpdb.hpp"
#include "driftbench/iforest.hpp"

namespace driftbench::driftstats {

struct VarianceProfile {
  std::vector<fpdb::DaySeriesEntry> per_day_means;
  double variance = 0.0;           // population (divisor n) over raw detections
  double variance_unbiased = 0.0;  // divisor n-1 (0 when a single detection)
  std::size_t n_detections = 0;
};

// Variance of all raw detected samples of one (AP, RP) pair across days;
// -110 absences never enter the series.
VarianceProfile variance_profile(const fpdb::DynamicDatabase& db, const fpdb::ApId& ap,
                                 int rp_id);

enum class FeatureMode {
  mean,   // 1-D feature: the daily mean level (sentinel -110 on empty days)
  stats,  // 5-D: mean, std, min, max, detection fraction
};

// One sample per day present in the database view.
std::vector<DailySample> daily_samples(const fpdb::DynamicDatabase& db,
                                       const fpdb::ApId& ap, int rp_id,
                                       FeatureMode mode);

struct AnomalyRow {
  int day_index = 0;
  double mean_rssi = fpdb::kNotDetected;
  double anomaly_score = 0.0;
  double signed_score = 0.0;
  bool flagged = false;
};

// Fits a forest on the per-day samples and scores every day.
std::vector<AnomalyRow> score_days(const fpdb::DynamicDatabase& db,
                                   const fpdb::ApId& ap, int rp_id, FeatureMode mode,
                                   const ForestHyperparams& hyper);

// anomaly.csv: day_index,mean_rssi,anomaly_score,signed_score,flagged
void write_anomaly_csv(const std::filesystem::path& path,
                       const std::vector<AnomalyRow>& rows);

}  // namespace driftbench::driftstats
