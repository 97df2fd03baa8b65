#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "driftbench/fpdb.hpp"
#include "driftbench/gp.hpp"
#include "driftbench/nn.hpp"

namespace driftbench::evalharness {

struct SplitSpec {
  int train_first = 1;
  int train_last = 24;
  int test_first = 25;
  int test_last = 44;

  void validate() const;  // ordered, disjoint, non-empty
};

struct EvalOptions {
  int group_size = 5;
  int trend_degree = 6;
};

struct DayMetric {
  int day_index = 0;
  double metric = 0.0;  // accuracy fraction (dnn) or mean error in m (gp)
  int n_records = 0;
  int n_excluded = 0;   // records at RPs outside the class set (dnn only)
  bool skipped = false;  // no scorable records that day
};

struct GroupAverage {
  int first_day = 0;
  int last_day = 0;
  double mean = 0.0;
  int count = 0;
  bool partial = false;  // trailing short group, kept but marked
};

struct DriftReport {
  std::string model_kind;  // "dnn" | "gp"
  SplitSpec split;
  std::uint64_t seed = 0;
  std::vector<DayMetric> per_day;  // one entry per day of the test window
  double min = 0.0, max = 0.0, mean = 0.0;  // over non-skipped per-day metrics
  int group_size = 5;
  std::vector<GroupAverage> group_averages;
  int trend_degree = 6;
  bool trend_ok = false;
  std::string trend_error;
  std::vector<double> trend_coeffs;  // ascending powers of day_index
  std::uint64_t model_hash_before = 0;
  std::uint64_t model_hash_after = 0;
  nlohmann::ordered_json metadata;  // model-kind specifics (counts, config echo)

  nlohmann::ordered_json to_json() const;
  static DriftReport from_json(const nlohmann::ordered_json& j);
};

// Consecutive chunks of group_size; a trailing short chunk is kept and
// marked partial.
std::vector<GroupAverage> group_averages(std::span<const DayMetric> series,
                                         int group_size);

// Least-squares polynomial over (day_index, metric) of the non-skipped days.
std::vector<double> trend_fit(std::span<const DayMetric> series, int degree);

// Train once on the training window, then score every test day without
// touching the model again (the report carries parameter hashes from before
// and after the loop as evidence).
DriftReport run_dnn_eval(const fpdb::DynamicDatabase& db, const SplitSpec& split,
                         locmodels::DnnConfig cfg, const EvalOptions& opts = {});
DriftReport run_gp_eval(const fpdb::DynamicDatabase& db, const SplitSpec& split,
                        const locmodels::GpConfig& cfg, const EvalOptions& opts = {});

// Same evaluation loops against an already trained model.
DriftReport run_dnn_eval_with_model(const fpdb::DynamicDatabase& db,
                                    const SplitSpec& split,
                                    const locmodels::DnnClassifier& clf,
                                    const EvalOptions& opts = {});
DriftReport run_gp_eval_with_model(const fpdb::DynamicDatabase& db,
                                   const SplitSpec& split,
                                   const locmodels::GpModel& model,
                                   const EvalOptions& opts = {});

void write_report_json(const DriftReport& report, const std::filesystem::path& path);
void write_per_day_csv(const DriftReport& report, const std::filesystem::path& path);
void write_trend_csv(const DriftReport& report, const std::filesystem::path& path);

}  // namespace driftbench::evalharness
