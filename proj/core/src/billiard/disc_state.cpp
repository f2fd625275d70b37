#include "arrowlab/billiard/disc_state.hpp"

#include <fmt/format.h>

#include "arrowlab/core/error.hpp"

namespace arrowlab::billiard {
namespace {

bool strictly_inside(const FixedVec2& p, const Box& box) {
  const FixedPoint zero;
  return p.x > zero && p.x < box.width && p.y > zero && p.y < box.height;
}

}  // namespace

void DiscState::validate() const {
  if (positions.empty()) throw DomainError("disc state needs at least one disc");
  if (prev_positions.size() != positions.size()) {
    throw DomainError(fmt::format("disc state has {} positions but {} previous positions", positions.size(),
                                  prev_positions.size()));
  }
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (!strictly_inside(positions[i], box) || !strictly_inside(prev_positions[i], box)) {
      throw DomainError(fmt::format("disc {} at ({}, {}) is outside the box (step {})", i,
                                    positions[i].x.to_string(), positions[i].y.to_string(), step_index));
    }
  }
}

std::vector<core::Point2> DiscState::positions_as_points() const {
  std::vector<core::Point2> out;
  out.reserve(positions.size());
  for (const auto& p : positions) out.push_back({p.x.to_double(), p.y.to_double()});
  return out;
}

bool same_phase_point(const DiscState& a, const DiscState& b) {
  return a.positions == b.positions && a.prev_positions == b.prev_positions && a.radius == b.radius &&
         a.box == b.box;
}

}  // namespace arrowlab::billiard
