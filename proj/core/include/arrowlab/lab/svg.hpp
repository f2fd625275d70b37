#pragma once

#include <string>
#include <utility>
#include <vector>

#include "arrowlab/billiard/engine.hpp"

namespace arrowlab::lab {

struct AxisMeta {
  std::string title;
  std::string x_label;
  std::string y_label;
};

/// Spacetime diagram: the x coordinate of each ball horizontally, time
/// running downward, one polyline per ball. Throws DomainError when the
/// trajectory is empty.
std::string emit_spacetime_svg(const billiard::Trajectory& t, const AxisMeta& meta);

/// A single curve y(x), e.g. entropy against step. Throws DomainError for
/// an empty series.
std::string emit_series_svg(const std::vector<std::pair<double, double>>& series, const AxisMeta& meta);

}  // namespace arrowlab::lab
