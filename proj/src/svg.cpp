#include "driftbench/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "driftbench/fsio.hpp"
#include "driftbench/stats.hpp"

namespace driftbench::svg {

namespace {

constexpr double kWidth = 800, kHeight = 480;
constexpr double kLeft = 64, kRight = 24, kTop = 40, kBottom = 56;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

std::string render_drift_chart(const evalharness::DriftReport& report) {
  std::vector<std::pair<double, double>> points;
  for (const auto& d : report.per_day)
    if (!d.skipped) points.emplace_back(static_cast<double>(d.day_index), d.metric);

  double x_lo = points.empty() ? 0.0 : points.front().first;
  double x_hi = points.empty() ? 1.0 : points.back().first;
  double y_lo = report.min, y_hi = report.max;
  if (x_hi == x_lo) x_hi = x_lo + 1.0;
  if (y_hi == y_lo) {
    y_lo -= 0.5;
    y_hi += 0.5;
  }
  const double y_pad = 0.08 * (y_hi - y_lo);
  y_lo -= y_pad;
  y_hi += y_pad;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto sy = [&](double y) { return kTop + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  const std::string title = report.model_kind == "dnn"
                                ? "Classification accuracy per test day"
                                : "Mean localization error per test day [m]";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

  // axes
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\""
      << kLeft + plot_w << "\" y2=\"" << kTop + plot_h
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\" stroke-width=\"1\"/>\n";

  const int n_ticks = 5;
  for (int t = 0; t <= n_ticks; ++t) {
    const double fx = x_lo + (x_hi - x_lo) * t / n_ticks;
    const double fy = y_lo + (y_hi - y_lo) * t / n_ticks;
    out << "<line x1=\"" << fmt(sx(fx)) << "\" y1=\"" << fmt(kTop + plot_h)
        << "\" x2=\"" << fmt(sx(fx)) << "\" y2=\"" << fmt(kTop + plot_h + 5)
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(sx(fx)) << "\" y=\"" << fmt(kTop + plot_h + 20)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt_tick(std::round(fx)) << "</text>\n";
    out << "<line x1=\"" << fmt(kLeft - 5) << "\" y1=\"" << fmt(sy(fy)) << "\" x2=\""
        << fmt(kLeft) << "\" y2=\"" << fmt(sy(fy)) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(kLeft - 9) << "\" y=\"" << fmt(sy(fy) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt_tick(std::round(fy * 100.0) / 100.0) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << "test day index</text>\n";
  out << "<text x=\"18\" y=\"" << kTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 18 " << kTop + plot_h / 2 << ")\">"
      << (report.model_kind == "dnn" ? "accuracy" : "error [m]") << "</text>\n";

  if (!points.empty()) {
    out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : points) out << fmt(sx(x)) << ',' << fmt(sy(y)) << ' ';
    out << "\"/>\n";
    for (const auto& [x, y] : points) {
      out << "<circle cx=\"" << fmt(sx(x)) << "\" cy=\"" << fmt(sy(y))
          << "\" r=\"3\" fill=\"#1f77b4\"/>\n";
    }
  }

  if (report.trend_ok && !report.trend_coeffs.empty()) {
    out << "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\" "
        << "stroke-dasharray=\"6 4\" points=\"";
    const int samples = 160;
    for (int s = 0; s <= samples; ++s) {
      const double x = x_lo + (x_hi - x_lo) * s / samples;
      const double y =
          std::clamp(numerics::polyval(report.trend_coeffs, x), y_lo, y_hi);
      out << fmt(sx(x)) << ',' << fmt(sy(y)) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << kLeft + plot_w - 6 << "\" y=\"" << kTop + 14
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" "
        << "fill=\"#d62728\">degree-" << report.trend_degree << " fit</text>\n";
  }

  out << "</svg>\n";
  return out.str();
}

void write_drift_svg(const evalharness::DriftReport& report,
                     const std::filesystem::path& path) {
  fsio::atomic_write_file(path, render_drift_chart(report));
}

}  // namespace driftbench::svg
