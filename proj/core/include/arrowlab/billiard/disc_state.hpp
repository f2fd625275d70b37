#pragma once

#include <cstdint>
#include <vector>

#include "arrowlab/core/coarse_grain.hpp"
#include "arrowlab/core/fixed_point.hpp"

namespace arrowlab::billiard {

using core::FixedPoint;
using core::FixedVec2;

struct Box {
  FixedPoint width;
  FixedPoint height;

  friend bool operator==(const Box&, const Box&) = default;
};

/// Phase point of N equal-mass discs in a box, in the two-step
/// (x_t, x_{t-1}) representation used by position-Verlet. The velocity is
/// implicit: v_t = (x_t - x_{t-1}) / dt.
struct DiscState {
  std::vector<FixedVec2> positions;
  std::vector<FixedVec2> prev_positions;
  FixedPoint radius;
  Box box;
  std::int64_t step_index = 0;

  std::size_t size() const { return positions.size(); }

  /// Throws DomainError unless N >= 1, both position sets have N entries
  /// and every position lies strictly inside the box.
  void validate() const;

  std::vector<core::Point2> positions_as_points() const;

  friend bool operator==(const DiscState&, const DiscState&) = default;
};

/// Equality of the phase point (positions and previous positions), ignoring
/// the step counter.
bool same_phase_point(const DiscState& a, const DiscState& b);

}  // namespace arrowlab::billiard
