#pragma once

#include <filesystem>
#include <string>

#include "driftbench/evalharness.hpp"

namespace driftbench::svg {

// Self-contained line chart of the per-day metric with the fitted trend
// curve overlaid when present. Pure SVG text, no renderer involved.
std::string render_drift_chart(const evalharness::DriftReport& report);

void write_drift_svg(const evalharness::DriftReport& report,
                     const std::filesystem::path& path);

}  // namespace driftbench::svg
