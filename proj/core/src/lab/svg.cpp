#include "arrowlab/lab/svg.hpp"

#include <algorithm>
#include <limits>

#include <fmt/format.h>

#include "arrowlab/core/error.hpp"

namespace arrowlab::lab {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 56.0;

// Maps [lo, hi] onto [0, 1]; degenerate ranges map to the middle.
double unit(double v, double lo, double hi) { return hi > lo ? (v - lo) / (hi - lo) : 0.5; }

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string header(const AxisMeta& meta, double xmin, double xmax, double ymin, double ymax) {
  std::string s = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" viewBox=\"0 0 {:.0f} {:.0f}\">\n",
      kWidth, kHeight, kWidth, kHeight);
  s += fmt::format("<title>{}</title>\n", escape(meta.title));
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" stroke=\"black\"/>\n",
                   kMargin, kMargin, kWidth - 2 * kMargin, kHeight - 2 * kMargin);
  s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n", kWidth / 2,
                   kMargin / 2, escape(meta.title));
  s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" font-size=\"12\">{}</text>\n", kWidth / 2,
                   kHeight - kMargin / 4, escape(meta.x_label));
  s += fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 {:.2f} {:.2f})\">{}"
      "</text>\n",
      kMargin / 3, kHeight / 2, kMargin / 3, kHeight / 2, escape(meta.y_label));
  s += fmt::format("<desc>x-range [{:.6g}, {:.6g}] y-range [{:.6g}, {:.6g}]</desc>\n", xmin, xmax, ymin, ymax);
  return s;
}

}  // namespace

std::string emit_spacetime_svg(const billiard::Trajectory& t, const AxisMeta& meta) {
  if (t.snapshots.empty() || t.snapshots.front().positions.empty()) {
    throw DomainError("emit_spacetime_svg: empty trajectory");
  }
  const std::size_t balls = t.snapshots.front().positions.size();
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  for (const auto& snap : t.snapshots) {
    for (const auto& p : snap.positions) {
      xmin = std::min(xmin, p.x.to_double());
      xmax = std::max(xmax, p.x.to_double());
    }
  }
  const double tmin = static_cast<double>(t.snapshots.front().step);
  const double tmax = static_cast<double>(t.snapshots.back().step);
  const double plot_w = kWidth - 2 * kMargin;
  const double plot_h = kHeight - 2 * kMargin;

  std::string s = header(meta, xmin, xmax, tmin, tmax);
  for (std::size_t b = 0; b < balls; ++b) {
    s += fmt::format("<polyline data-ball=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1\" points=\"", b,
                     b == 0 ? "crimson" : "steelblue");
    for (std::size_t i = 0; i < t.snapshots.size(); ++i) {
      const auto& snap = t.snapshots[i];
      const double px = kMargin + plot_w * unit(snap.positions.at(b).x.to_double(), xmin, xmax);
      const double py = kMargin + plot_h * unit(static_cast<double>(snap.step), tmin, tmax);
      s += fmt::format("{}{:.2f},{:.2f}", i == 0 ? "" : " ", px, py);
    }
    s += "\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

std::string emit_series_svg(const std::vector<std::pair<double, double>>& series, const AxisMeta& meta) {
  if (series.empty()) throw DomainError("emit_series_svg: empty series");
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = xmin;
  double ymax = -xmin;
  for (const auto& [x, y] : series) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  const double plot_w = kWidth - 2 * kMargin;
  const double plot_h = kHeight - 2 * kMargin;
  std::string s = header(meta, xmin, xmax, ymin, ymax);
  s += "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double px = kMargin + plot_w * unit(series[i].first, xmin, xmax);
    const double py = kHeight - kMargin - plot_h * unit(series[i].second, ymin, ymax);
    s += fmt::format("{}{:.2f},{:.2f}", i == 0 ? "" : " ", px, py);
  }
  s += "\"/>\n</svg>\n";
  return s;
}

}  // namespace arrowlab::lab
