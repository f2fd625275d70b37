#pragma once

#include <array>
#include <complex>

#include "arrowlab/core/rng.hpp"
#include "arrowlab/topology/transition_system.hpp"

namespace arrowlab::topology {

/// Spin-1/2 state in the z basis (z+, z-).
struct SpinState {
  std::complex<double> up;
  std::complex<double> down;

  double norm() const;
};

enum class Basis { Z, X };

/// Eigenstates of the given basis: index 0 is the + outcome, 1 the - outcome.
std::array<SpinState, 2> basis_states(Basis b);

struct Measurement {
  int outcome = 0;  // 0 for +, 1 for -
  SpinState collapsed;
};

/// Projective measurement with Born probabilities |<e_i|psi>|^2.
Measurement measure(const SpinState& psi, Basis basis, core::RngStream& rng);

enum class Source { S_xplus, P_xminus };
enum class Detector { A_zplus, B_zminus };
enum class ReturnPath { returns_to_S_xplus, deflects_to_P_xminus };

struct ForwardOutcome {
  Source source;
  Detector detector;
  SpinState collapsed;
};

/// Prepares |x+> (source S) or |x-> (source P) and measures z.
ForwardOutcome sg_forward(Source source, core::RngStream& rng);

/// Runs the apparatus backward: the collapsed z eigenstate passes the x
/// analyzer, which sends x+ to S and x- to P.
ReturnPath sg_reverse(const ForwardOutcome& outcome, core::RngStream& rng);

std::string_view to_string(Source s);
std::string_view to_string(Detector d);

struct SgStatistics {
  std::size_t trials = 0;
  std::size_t detector_a_from_s = 0;
  std::size_t detector_a_from_p = 0;
  std::size_t returns_to_s = 0;  // reversals of S-run outcomes that reach S
  std::size_t reversed_a = 0;    // reversals started from detector A outcomes
  std::size_t reversed_a_to_s = 0;
  /// Observed (source -> detector) links, with reversal arrivals counted as
  /// possible pasts of the detector they started from.
  TransitionSystem aggregate;
};

/// `trials` forward runs from each source followed by a reversal of each
/// outcome.
SgStatistics sg_experiment(std::size_t trials, core::RngStream& rng);

}  // namespace arrowlab::topology
