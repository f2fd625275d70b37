#pragma once

#include <vector>

#include <Eigen/Dense>

#include "arrowlab/grw/wavefunction.hpp"

namespace arrowlab::grw {

enum class Boundary { Open, Periodic };

/// Tight-binding lattice Hamiltonian, identical for every particle:
///   H_1 = -hopping * sum_x (|x><x+1| + |x+1><x|) + sum_x onsite[x] |x><x|
/// plus an optional contact interaction `interaction * [x_k == x_l]` for
/// each particle pair, available in entangled mode only.
struct LatticeHamiltonian {
  double hopping = 1.0;
  std::vector<double> onsite;  // length M
  Boundary boundary = Boundary::Open;
  double interaction = 0.0;

  static LatticeHamiltonian free(std::size_t n_sites, double hopping = 1.0, Boundary boundary = Boundary::Open);

  std::size_t sites() const { return onsite.size(); }
  /// Dense single-particle matrix (real symmetric).
  Eigen::MatrixXd single_particle_matrix() const;
  /// Applies the single-particle operator to a vector in O(M).
  Eigen::VectorXcd apply_single(const Eigen::VectorXcd& v) const;
};

/// exp(-i H dt) for a fixed Hamiltonian and time step, precomputed from the
/// eigendecomposition of the single-particle matrix.
class Propagator {
 public:
  Propagator(const LatticeHamiltonian& h, double dt);

  const Eigen::MatrixXcd& single_particle() const { return u_; }
  const LatticeHamiltonian& hamiltonian() const { return h_; }
  double dt() const { return dt_; }

  /// psi <- U psi (kinetic factor on each axis, then the interaction phase).
  void apply(WaveFunction& psi) const;
  /// psi <- U^dagger psi, the exact inverse of apply().
  void apply_inverse(WaveFunction& psi) const;

 private:
  void apply_interaction_phase(WaveFunction& psi, double sign) const;

  LatticeHamiltonian h_;
  double dt_;
  Eigen::MatrixXcd u_;
  Eigen::MatrixXcd u_adjoint_;
};

/// Applies `op` (M x M) to particle k's coordinate of an entangled array.
void apply_on_axis(Eigen::VectorXcd& amplitudes, std::size_t n_particles, std::size_t n_sites, std::size_t k,
                   const Eigen::MatrixXcd& op);

/// psi <- exp(-i H dt) psi. Throws DomainError if dt <= 0 or the lattice
/// sizes differ, or if an interaction is requested in product mode.
WaveFunction unitary_step(WaveFunction psi, const LatticeHamiltonian& h, double dt);

/// <psi|H|psi> including the interaction term.
double energy(const WaveFunction& psi, const LatticeHamiltonian& h);

}  // namespace arrowlab::grw
