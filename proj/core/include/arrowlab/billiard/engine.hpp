#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "arrowlab/billiard/disc_state.hpp"
#include "arrowlab/core/coarse_grain.hpp"

namespace arrowlab::billiard {

/// Steep truncated repulsion standing in for hard collisions.
///
/// Pair energy (k/2)(c^2 - d^2)^2 / c^2 for d < c, wall energy
/// (k_w/2) p^2 for a disc penetrating a wall by p. Both are polynomial in
/// the coordinates, so forces are evaluated entirely in fixed point and
/// depend on positions only.
struct ForceLaw {
  FixedPoint pair_stiffness;
  FixedPoint cutoff;
  FixedPoint wall_stiffness;

  /// cutoff = 2 * radius.
  static ForceLaw for_radius(FixedPoint radius, FixedPoint pair_stiffness, FixedPoint wall_stiffness);
};

/// Per-disc force at the given positions. Pair forces are computed once per
/// pair and applied with opposite signs.
std::vector<FixedVec2> forces(const DiscState& s, const ForceLaw& law);

/// One position-Verlet step: x_{t+1} = 2 x_t - x_{t-1} + F(x_t) dt^2 (unit mass).
/// Throws OverflowError (with the step index) on fixed-point overflow and
/// DomainError if a disc leaves the box.
DiscState step(const DiscState& s, const ForceLaw& law, FixedPoint dt);

struct Snapshot {
  std::int64_t step = 0;
  std::vector<FixedVec2> positions;
};

struct EntropySample {
  std::int64_t step = 0;
  double entropy = 0.0;
};

/// Sampled history of a run: positions for the spacetime diagram and the
/// coarse-grained entropy at the same steps.
struct Trajectory {
  std::vector<Snapshot> snapshots;
  std::vector<EntropySample> entropy_series;

  /// Appends another trajectory, dropping leading samples whose step does
  /// not exceed the last one already held.
  void append(const Trajectory& later);
};

/// Applies `n_steps` steps, sampling the start state, every `record_every`-th
/// step and the final state.
std::pair<DiscState, Trajectory> advance(DiscState s, std::int64_t n_steps, const ForceLaw& law, FixedPoint dt,
                                         std::int64_t record_every, const core::CoarseGraining& graining);

/// Exact time reversal: (x_t, x_{t-1}) -> (x_t, x_{t+1}). Positions are kept
/// and the central-difference velocity is negated exactly; applying it twice
/// is the identity.
DiscState reverse_momenta(const DiscState& s, const ForceLaw& law, FixedPoint dt);

/// x_{t+1} - x_{t-1} per disc (2 dt times the central-difference velocity).
std::vector<FixedVec2> central_displacements(const DiscState& s, const ForceLaw& law, FixedPoint dt);

/// True when `final_state` sits at the positions of `initial` with every
/// central-difference velocity exactly negated.
bool recovered(const DiscState& final_state, const DiscState& initial, const ForceLaw& law, FixedPoint dt);

/// Shifts one disc's current and previous position by `displacement`,
/// leaving its velocity untouched.
DiscState perturb(const DiscState& s, std::size_t ball, FixedVec2 displacement);

/// Kinetic (central difference) plus potential energy; diagnostic only.
double total_energy(const DiscState& s, const ForceLaw& law, FixedPoint dt);

double coarse_entropy(const DiscState& s, const core::CoarseGraining& graining);

struct SpacetimeRow {
  std::int64_t step = 0;
  std::size_t ball = 0;
  FixedPoint x;
  FixedPoint y;

  friend bool operator==(const SpacetimeRow&, const SpacetimeRow&) = default;
};

/// One row per (snapshot, ball), in snapshot then ball order.
std::vector<SpacetimeRow> spacetime_export(const Trajectory& t);

/// CSV with header `step,ball,x,y`; coordinates as exact decimals.
void write_spacetime_csv(std::ostream& out, const std::vector<SpacetimeRow>& rows);
std::vector<SpacetimeRow> read_spacetime_csv(std::istream& in);

/// Parameters of the ordered starting layout: a square lattice of touching
/// discs at rest plus one striker to its left moving in +x.
struct OrderedLayout {
  std::int64_t n_cluster = 15;
  FixedPoint striker_speed = FixedPoint::from_int(1);
  Box box{FixedPoint::from_int(56), FixedPoint::from_int(56)};
  FixedPoint radius = FixedPoint::from_int(1);
  FixedPoint dt = FixedPoint::from_ratio_pow2(1, 6);
  /// Lattice site of the lower-left cluster disc.
  FixedVec2 cluster_origin{FixedPoint::parse("35.5"), FixedPoint::parse("28.5")};
  FixedPoint striker_x = FixedPoint::from_int(8);
  /// Striker height is the cluster's mid-height plus a uniform offset in
  /// [-striker_jitter, striker_jitter] drawn from the seed.
  FixedPoint striker_jitter = FixedPoint::from_int(1);
  std::uint64_t rng_seed = 0;
};

/// Builds the ordered state. Throws DomainError ("geometry overflow") when
/// the cluster or striker does not fit inside the box clear of the walls.
DiscState init_ordered(const OrderedLayout& layout);

}  // namespace arrowlab::billiard
