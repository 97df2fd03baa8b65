#include "driftbench/driftstats.hpp"

#include <sstream>

#include "driftbench/csv.hpp"
#include "driftbench/errors.hpp"
#include "driftbench/fsio.hpp"
#include "driftbench/stats.hpp"

namespace driftbench::driftstats {

VarianceProfile variance_profile(const fpdb::DynamicDatabase& db, const fpdb::ApId& ap,
                                 int rp_id) {
  auto raw = fpdb::rssi_series(db, ap, rp_id, fpdb::Aggregation::raw);
  VarianceProfile profile;
  std::vector<double> all;
  for (const auto& day : raw)
    for (double v : day.samples) all.push_back(v);
  if (all.empty())
    throw Error(Errc::no_detections,
                ap + " was never detected at rp " + std::to_string(rp_id));
  profile.n_detections = all.size();
  profile.variance = numerics::variance(all);
  profile.variance_unbiased =
      all.size() > 1 ? numerics::variance_unbiased(all) : 0.0;
  profile.per_day_means = fpdb::rssi_series(db, ap, rp_id, fpdb::Aggregation::mean);
  return profile;
}

std::vector<DailySample> daily_samples(const fpdb::DynamicDatabase& db,
                                       const fpdb::ApId& ap, int rp_id,
                                       FeatureMode mode) {
  auto series = fpdb::rssi_series(db, ap, rp_id, fpdb::Aggregation::stats);
  std::vector<DailySample> samples;
  samples.reserve(series.size());
  for (const auto& day : series) {
    DailySample s;
    s.day_index = day.day_index;
    if (mode == FeatureMode::mean) {
      s.features = {day.mean};
    } else {
      s.features = {day.mean, day.stddev, day.min, day.max, day.detection_fraction};
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

std::vector<AnomalyRow> score_days(const fpdb::DynamicDatabase& db,
                                   const fpdb::ApId& ap, int rp_id, FeatureMode mode,
                                   const ForestHyperparams& hyper) {
  const auto samples = daily_samples(db, ap, rp_id, mode);
  const ForestModel model = fit_forest(samples, hyper);
  const auto signed_scores = decision_scores(model, samples);

  std::vector<AnomalyRow> rows;
  rows.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    AnomalyRow row;
    row.day_index = samples[i].day_index;
    row.mean_rssi = samples[i].features[0];
    row.anomaly_score = anomaly_score(model, samples[i]);
    row.signed_score = signed_scores[i];
    row.flagged = row.signed_score <= 0.0;
    rows.push_back(row);
  }
  return rows;
}

void write_anomaly_csv(const std::filesystem::path& path,
                       const std::vector<AnomalyRow>& rows) {
  std::ostringstream out;
  out << "day_index,mean_rssi,anomaly_score,signed_score,flagged\n";
  for (const auto& row : rows) {
    out << row.day_index << ',' << csvio::format_double(row.mean_rssi) << ','
        << csvio::format_double(row.anomaly_score) << ','
        << csvio::format_double(row.signed_score) << ',' << (row.flagged ? 1 : 0)
        << '\n';
  }
  fsio::atomic_write_file(path, out.str());
}

}  // namespace driftbench::driftstats
