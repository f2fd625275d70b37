#include "arrowlab/billiard/engine.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "arrowlab/core/error.hpp"
#include "arrowlab/core/rng.hpp"

namespace arrowlab::billiard {
namespace {

FixedPoint abs(FixedPoint v) { return v < FixedPoint{} ? -v : v; }

// Stream used by init_ordered for the striker placement.
constexpr std::uint64_t kLayoutStream = 1;

}  // namespace

ForceLaw ForceLaw::for_radius(FixedPoint radius, FixedPoint pair_stiffness, FixedPoint wall_stiffness) {
  return ForceLaw{pair_stiffness, radius * 2, wall_stiffness};
}

std::vector<FixedVec2> forces(const DiscState& s, const ForceLaw& law) {
  const std::size_t n = s.size();
  std::vector<FixedVec2> f(n);
  const FixedPoint c = law.cutoff;
  const FixedPoint c2 = c * c;
  // dU/d(d^2) prefactor: F_i = 2k/c^2 (c^2 - d^2) (x_i - x_j).
  const FixedPoint coef = FixedPoint::from_double(2.0 * law.pair_stiffness.to_double() / c2.to_double());

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const FixedVec2 d = s.positions[i] - s.positions[j];
      if (abs(d.x) >= c || abs(d.y) >= c) continue;
      const FixedPoint d2 = d.x * d.x + d.y * d.y;
      if (d2 >= c2) continue;
      const FixedPoint mag = coef * (c2 - d2);
      const FixedVec2 fij{mag * d.x, mag * d.y};
      f[i] = f[i] + fij;
      f[j] = f[j] - fij;
    }
  }

  const FixedPoint r = s.radius;
  const FixedPoint kw = law.wall_stiffness;
  const FixedPoint right = s.box.width - r;
  const FixedPoint top = s.box.height - r;
  for (std::size_t i = 0; i < n; ++i) {
    const FixedVec2& p = s.positions[i];
    if (p.x < r) f[i].x += kw * (r - p.x);
    if (p.x > right) f[i].x -= kw * (p.x - right);
    if (p.y < r) f[i].y += kw * (r - p.y);
    if (p.y > top) f[i].y -= kw * (p.y - top);
  }
  return f;
}

namespace {

// x_{t+1} = 2 x_t - x_{t-1} + F dt^2
std::vector<FixedVec2> next_positions(const DiscState& s, const ForceLaw& law, FixedPoint dt) {
  const auto f = forces(s, law);
  const FixedPoint dt2 = dt * dt;
  std::vector<FixedVec2> next(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const FixedVec2& x = s.positions[i];
    const FixedVec2& xp = s.prev_positions[i];
    next[i] = FixedVec2{x.x * 2 - xp.x + f[i].x * dt2, x.y * 2 - xp.y + f[i].y * dt2};
  }
  return next;
}

}  // namespace

DiscState step(const DiscState& s, const ForceLaw& law, FixedPoint dt) {
  DiscState out;
  try {
    out.positions = next_positions(s, law, dt);
  } catch (const OverflowError& e) {
    throw OverflowError(fmt::format("{} at step {}", e.what(), s.step_index));
  }
  out.prev_positions = s.positions;
  out.radius = s.radius;
  out.box = s.box;
  out.step_index = s.step_index + 1;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& p = out.positions[i];
    if (p.x <= FixedPoint{} || p.x >= out.box.width || p.y <= FixedPoint{} || p.y >= out.box.height) {
      throw DomainError(fmt::format("disc {} left the box at step {}", i, out.step_index));
    }
  }
  return out;
}

double coarse_entropy(const DiscState& s, const core::CoarseGraining& graining) {
  const auto pts = s.positions_as_points();
  return core::entropy(core::coarse_grain(pts, graining));
}

void Trajectory::append(const Trajectory& later) {
  const std::int64_t last_snap = snapshots.empty() ? INT64_MIN : snapshots.back().step;
  for (const auto& snap : later.snapshots) {
    if (snap.step > last_snap) snapshots.push_back(snap);
  }
  const std::int64_t last_s = entropy_series.empty() ? INT64_MIN : entropy_series.back().step;
  for (const auto& e : later.entropy_series) {
    if (e.step > last_s) entropy_series.push_back(e);
  }
}

std::pair<DiscState, Trajectory> advance(DiscState s, std::int64_t n_steps, const ForceLaw& law, FixedPoint dt,
                                         std::int64_t record_every, const core::CoarseGraining& graining) {
  if (n_steps < 0) throw DomainError("advance: negative step count");
  if (record_every < 1) throw DomainError("advance: record_every must be >= 1");
  Trajectory traj;
  const auto record = [&](const DiscState& st) {
    traj.snapshots.push_back({st.step_index, st.positions});
    traj.entropy_series.push_back({st.step_index, coarse_entropy(st, graining)});
  };
  record(s);
  for (std::int64_t k = 1; k <= n_steps; ++k) {
    s = step(s, law, dt);
    if (k % record_every == 0 || k == n_steps) record(s);
  }
  return {std::move(s), std::move(traj)};
}

DiscState reverse_momenta(const DiscState& s, const ForceLaw& law, FixedPoint dt) {
  DiscState out = s;
  out.prev_positions = next_positions(s, law, dt);
  return out;
}

std::vector<FixedVec2> central_displacements(const DiscState& s, const ForceLaw& law, FixedPoint dt) {
  auto next = next_positions(s, law, dt);
  for (std::size_t i = 0; i < next.size(); ++i) next[i] = next[i] - s.prev_positions[i];
  return next;
}

bool recovered(const DiscState& final_state, const DiscState& initial, const ForceLaw& law, FixedPoint dt) {
  if (final_state.positions != initial.positions) return false;
  const auto vf = central_displacements(final_state, law, dt);
  const auto vi = central_displacements(initial, law, dt);
  for (std::size_t i = 0; i < vf.size(); ++i) {
    if (vf[i] != -vi[i]) return false;
  }
  return true;
}

DiscState perturb(const DiscState& s, std::size_t ball, FixedVec2 displacement) {
  if (ball >= s.size()) throw DomainError(fmt::format("perturb: ball {} out of range (N = {})", ball, s.size()));
  DiscState out = s;
  out.positions[ball] = out.positions[ball] + displacement;
  out.prev_positions[ball] = out.prev_positions[ball] + displacement;
  const auto inside = [&](const FixedVec2& p) {
    return p.x > FixedPoint{} && p.x < s.box.width && p.y > FixedPoint{} && p.y < s.box.height;
  };
  if (!inside(out.positions[ball]) || !inside(out.prev_positions[ball])) {
    throw DomainError(fmt::format("perturb: displacement ({}, {}) moves ball {} out of the box",
                                  displacement.x.to_string(), displacement.y.to_string(), ball));
  }
  return out;
}

double total_energy(const DiscState& s, const ForceLaw& law, FixedPoint dt) {
  const auto v2dt = central_displacements(s, law, dt);
  const double two_dt = 2.0 * dt.to_double();
  double kinetic = 0.0;
  for (const auto& d : v2dt) {
    const double vx = d.x.to_double() / two_dt;
    const double vy = d.y.to_double() / two_dt;
    kinetic += 0.5 * (vx * vx + vy * vy);
  }
  const double k = law.pair_stiffness.to_double();
  const double c2 = law.cutoff.to_double() * law.cutoff.to_double();
  double potential = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const double dx = s.positions[i].x.to_double() - s.positions[j].x.to_double();
      const double dy = s.positions[i].y.to_double() - s.positions[j].y.to_double();
      const double d2 = dx * dx + dy * dy;
      if (d2 < c2) potential += 0.5 * k * (c2 - d2) * (c2 - d2) / c2;
    }
  }
  const double r = s.radius.to_double();
  const double kw = law.wall_stiffness.to_double();
  const double w = s.box.width.to_double();
  const double h = s.box.height.to_double();
  for (const auto& p : s.positions) {
    const double x = p.x.to_double();
    const double y = p.y.to_double();
    for (double pen : {r - x, x - (w - r), r - y, y - (h - r)}) {
      if (pen > 0) potential += 0.5 * kw * pen * pen;
    }
  }
  return kinetic + potential;
}

std::vector<SpacetimeRow> spacetime_export(const Trajectory& t) {
  std::vector<SpacetimeRow> rows;
  for (const auto& snap : t.snapshots) {
    for (std::size_t b = 0; b < snap.positions.size(); ++b) {
      rows.push_back({snap.step, b, snap.positions[b].x, snap.positions[b].y});
    }
  }
  return rows;
}

void write_spacetime_csv(std::ostream& out, const std::vector<SpacetimeRow>& rows) {
  out << "step,ball,x,y\n";
  for (const auto& r : rows) out << r.step << ',' << r.ball << ',' << r.x.to_string() << ',' << r.y.to_string() << '\n';
}

std::vector<SpacetimeRow> read_spacetime_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "step,ball,x,y") throw ConfigError("spacetime CSV: missing header");
  std::vector<SpacetimeRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string f[4];
    for (auto& field : f) {
      if (!std::getline(ss, field, ',')) throw ConfigError(fmt::format("spacetime CSV: short line {}", lineno));
    }
    try {
      rows.push_back({std::stoll(f[0]), static_cast<std::size_t>(std::stoull(f[1])), FixedPoint::parse(f[2]),
                      FixedPoint::parse(f[3])});
    } catch (const std::logic_error&) {
      throw ConfigError(fmt::format("spacetime CSV: bad number on line {}", lineno));
    }
  }
  return rows;
}

DiscState init_ordered(const OrderedLayout& layout) {
  if (layout.n_cluster < 0) throw DomainError("init_ordered: negative cluster size");
  const FixedPoint r = layout.radius;
  const FixedPoint spacing = r * 2;
  const auto n = static_cast<std::size_t>(layout.n_cluster);

  std::size_t columns = 1;
  while (columns * columns < n) ++columns;
  const std::size_t rows = n == 0 ? 0 : (n + columns - 1) / columns;

  DiscState s;
  s.radius = r;
  s.box = layout.box;

  // Mid-height of the lattice: half of (rows - 1) spacings above the origin.
  const FixedPoint mid_y = layout.cluster_origin.y + r * static_cast<std::int64_t>(rows == 0 ? 0 : rows - 1);
  auto rng = core::rng_stream(layout.rng_seed, kLayoutStream);
  const double u = 2.0 * rng.uniform() - 1.0;
  const FixedPoint jitter = FixedPoint::from_double(u * layout.striker_jitter.to_double());

  const FixedVec2 striker{layout.striker_x, mid_y + jitter};
  const FixedVec2 step_back{layout.striker_speed * layout.dt, FixedPoint{}};
  s.positions.push_back(striker);
  s.prev_positions.push_back(striker - step_back);

  for (std::size_t k = 0; k < n; ++k) {
    const auto col = static_cast<std::int64_t>(k % columns);
    const auto row = static_cast<std::int64_t>(k / columns);
    const FixedVec2 p{layout.cluster_origin.x + spacing * col, layout.cluster_origin.y + spacing * row};
    s.positions.push_back(p);
    s.prev_positions.push_back(p);
  }

  const auto clear_of_walls = [&](const FixedVec2& p) {
    return p.x >= r && p.x <= layout.box.width - r && p.y >= r && p.y <= layout.box.height - r;
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!clear_of_walls(s.positions[i]) || !clear_of_walls(s.prev_positions[i])) {
      throw DomainError(fmt::format("init_ordered: geometry overflow, disc {} does not fit in the {}x{} box", i,
                                    layout.box.width.to_string(), layout.box.height.to_string()));
    }
  }
  const FixedPoint c2 = spacing * spacing;
  for (std::size_t j = 1; j < s.size(); ++j) {
    const FixedVec2 d = s.positions[0] - s.positions[j];
    if (d.x * d.x + d.y * d.y < c2) {
      throw DomainError(fmt::format("init_ordered: geometry overflow, striker overlaps cluster disc {}", j));
    }
  }
  return s;
}

}  // namespace arrowlab::billiard
