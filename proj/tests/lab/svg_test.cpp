#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "arrowlab/core/error.hpp"
#include "arrowlab/lab/config.hpp"
#include "arrowlab/lab/scenarios.hpp"
#include "arrowlab/lab/svg.hpp"

using namespace arrowlab;
using namespace arrowlab::lab;
using billiard::FixedPoint;

namespace {

struct Polyline {
  std::size_t ball = 0;
  std::vector<std::pair<double, double>> points;
};

std::vector<Polyline> parse_polylines(const std::string& svg) {
  std::vector<Polyline> out;
  const std::regex line_re(R"re(<polyline data-ball="(\d+)"[^>]*points="([^"]*)")re");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), line_re); it != std::sregex_iterator(); ++it) {
    Polyline p;
    p.ball = std::stoul((*it)[1]);
    std::istringstream pts((*it)[2]);
    std::string pair;
    while (pts >> pair) {
      const auto comma = pair.find(',');
      p.points.emplace_back(std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1)));
    }
    out.push_back(std::move(p));
  }
  return out;
}

billiard::Trajectory tiny_trajectory() {
  billiard::Trajectory t;
  for (int s = 0; s < 3; ++s) {
    t.snapshots.push_back({s * 10,
                           {{FixedPoint::from_int(1 + s), FixedPoint::from_int(1)},
                            {FixedPoint::from_int(5 - s), FixedPoint::from_int(2)}}});
  }
  return t;
}

}  // namespace

TEST(Svg, OnePolylinePerBall) {
  const auto svg = emit_spacetime_svg(tiny_trajectory(), {"t", "x", "step"});
  const auto lines = parse_polylines(svg);
  ASSERT_EQ(lines.size(), 2u);
  for (const auto& l : lines) EXPECT_EQ(l.points.size(), 3u);
  // Time runs down the page.
  EXPECT_LT(lines[0].points.front().second, lines[0].points.back().second);
  // Ball 0 moves right, ball 1 moves left.
  EXPECT_LT(lines[0].points.front().first, lines[0].points.back().first);
  EXPECT_GT(lines[1].points.front().first, lines[1].points.back().first);
}

TEST(Svg, DeterministicBytes) {
  EXPECT_EQ(emit_spacetime_svg(tiny_trajectory(), {"a", "b", "c"}), emit_spacetime_svg(tiny_trajectory(), {"a", "b", "c"}));
  const std::vector<std::pair<double, double>> series{{0, 1.0}, {1, 2.5}, {2, 2.0}};
  EXPECT_EQ(emit_series_svg(series, {"s", "x", "y"}), emit_series_svg(series, {"s", "x", "y"}));
}

TEST(Svg, EscapesLabels) {
  const auto svg = emit_series_svg({{0, 0}}, {"a<b & \"c\"", "x", "y"});
  EXPECT_NE(svg.find("a&lt;b &amp; &quot;c&quot;"), std::string::npos);
}

TEST(Svg, EmptyDataIsAnError) {
  EXPECT_THROW(emit_spacetime_svg({}, {}), DomainError);
  EXPECT_THROW(emit_series_svg({}, {}), DomainError);
}

// The cluster's horizontal extent, read back from the drawn polylines,
// widens as the struck group disperses, and agrees with the raw data.
TEST(Svg, Fig3aClusterExtentExpands) {
  const auto cfg = make_config(Scenario::Fig3a);
  const auto run = run_billiard(Scenario::Fig3a, cfg.billiard(), cfg.seed);
  const auto lines = parse_polylines(emit_spacetime_svg(run.trajectory, {"fig3a", "x", "step"}));
  ASSERT_EQ(lines.size(), 16u);
  const auto extent = [&](std::size_t row) {
    double lo = 1e9, hi = -1e9;
    for (std::size_t b = 1; b < lines.size(); ++b) {
      lo = std::min(lo, lines[b].points[row].first);
      hi = std::max(hi, lines[b].points[row].first);
    }
    return hi - lo;
  };
  const auto data_extent = [&](std::size_t row) {
    double lo = 1e9, hi = -1e9;
    for (std::size_t b = 1; b < 16; ++b) {
      lo = std::min(lo, run.trajectory.snapshots[row].positions[b].x.to_double());
      hi = std::max(hi, run.trajectory.snapshots[row].positions[b].x.to_double());
    }
    return hi - lo;
  };
  const std::size_t last = lines[0].points.size() - 1;
  EXPECT_GT(extent(last), 3.0 * extent(0));
  EXPECT_GT(data_extent(last), 3.0 * data_extent(0));
  // Same ordering between the first and second half of the run.
  EXPECT_LT(extent(0), extent(last / 2) + 1e-9);
}
