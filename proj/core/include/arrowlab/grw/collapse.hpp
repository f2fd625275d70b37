#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "arrowlab/core/rng.hpp"
#include "arrowlab/grw/hamiltonian.hpp"
#include "arrowlab/grw/wavefunction.hpp"

namespace arrowlab::grw {

/// Collapse parameters in lattice units.
///
/// A hit multiplies particle k's coordinate by exp(-(x - a)^2 / (4 width)),
/// so the induced position density has standard deviation sqrt(width).
struct GrwParams {
  double hit_prob_per_particle_per_step = 0.01;
  double gaussian_width = 3.0;

  void validate() const;
};

struct HitEvent {
  std::int64_t step = 0;
  std::size_t particle = 0;
  std::size_t center = 0;

  friend bool operator==(const HitEvent&, const HitEvent&) = default;
};

/// P(a) = ||G_a psi||^2 / sum_a' ||G_a' psi||^2 over all M candidate centers.
std::vector<double> hit_center_distribution(const WaveFunction& psi, std::size_t k, double width);

/// Multiplies particle k's coordinate by the Gaussian centered at site a and
/// renormalizes. Amplitudes are only zeroed by floating-point underflow.
WaveFunction apply_hit(WaveFunction psi, std::size_t k, std::size_t a, double width);

/// For each particle in order: with probability lambda draw a center from
/// hit_center_distribution and apply the hit.
std::pair<WaveFunction, std::vector<HitEvent>> maybe_hit(WaveFunction psi, const GrwParams& params,
                                                         std::int64_t step, core::RngStream& rng);

struct GrwRecord {
  std::int64_t step = 0;
  double entropy = 0.0;      // total position-marginal entropy
  double gas_entropy = 0.0;  // see gas_entropy()
  double energy = 0.0;
  double norm = 0.0;
  std::size_t hits = 0;  // hits during this step
};

struct GrwTrajectory {
  std::vector<GrwRecord> records;  // records[0] describes the initial state
  std::vector<HitEvent> hits;
  WaveFunction final_state;
};

/// n_steps rounds of (unitary step, maybe_hit), recording diagnostics after
/// each round.
GrwTrajectory run(const WaveFunction& psi0, const LatticeHamiltonian& h, const GrwParams& params,
                  std::int64_t n_steps, double dt, core::RngStream& rng);

enum class ReverseMode {
  /// Re-apply the logged hits: collapse non-unitarity is the only source of
  /// irreversibility.
  ReplayHits,
  /// Draw fresh hits while running backward (exploratory).
  ResampleHits,
};

struct ResampleOptions {
  GrwParams params;
  core::RngStream* rng = nullptr;
};

/// Runs the forward dynamics backward from `final_state`: for steps
/// n_steps..1, re-apply that step's hits in reverse order, then undo the
/// unitary step. Throws DomainError if the log mentions a step outside
/// [1, n_steps] or a bad particle/center, or is not in step order.
/// `width` is the Gaussian width used by the forward run.
WaveFunction reverse_run(const WaveFunction& final_state, const LatticeHamiltonian& h, double dt,
                         std::int64_t n_steps, const std::vector<HitEvent>& hit_log, double width,
                         ReverseMode mode = ReverseMode::ReplayHits,
                         std::optional<ResampleOptions> resample = std::nullopt);

/// `step,entropy,energy,norm,hits_this_step`
void write_trajectory_csv(std::ostream& out, const GrwTrajectory& t);
/// `step,particle,center`
void write_hit_log_csv(std::ostream& out, const std::vector<HitEvent>& hits);
std::vector<HitEvent> read_hit_log_csv(std::istream& in);

}  // namespace arrowlab::grw
