#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace arrowlab::grw {

using Complex = std::complex<double>;

enum class Mode {
  /// Full M^N amplitude array; supports interactions.
  Entangled,
  /// N independent single-particle vectors (non-interacting gas).
  Product,
};

/// Largest entangled amplitude array accepted unless the caller raises it.
inline constexpr std::size_t kDefaultAmplitudeCap = std::size_t{1} << 24;

/// Inclusive range of lattice sites.
struct SiteRange {
  std::size_t first = 0;
  std::size_t last = 0;
  std::size_t size() const { return last - first + 1; }
};

/// Wavefunction of N distinguishable particles on an M-site lattice.
///
/// In entangled mode amplitude index = sum_k x_k * M^(N-1-k), i.e. particle
/// 0 is the slowest-varying coordinate. Public operations keep the state
/// normalized.
class WaveFunction {
 public:
  /// Empty placeholder (no particles).
  WaveFunction() = default;

  /// Normalizes each factor. Throws DomainError on mismatched sizes or zero vectors.
  static WaveFunction product(std::vector<Eigen::VectorXcd> factors);
  /// Normalizes the array. Throws DomainError if amplitudes.size() != M^N
  /// or exceeds `cap`.
  static WaveFunction entangled(std::size_t n_particles, std::size_t n_sites, Eigen::VectorXcd amplitudes,
                                std::size_t cap = kDefaultAmplitudeCap);

  Mode mode() const { return mode_; }
  std::size_t particles() const { return n_; }
  std::size_t sites() const { return m_; }

  /// Entangled-mode amplitude array (throws DomainError in product mode).
  const Eigen::VectorXcd& amplitudes() const;
  Eigen::VectorXcd& amplitudes_mut();
  /// Product-mode factor k (throws DomainError in entangled mode).
  const Eigen::VectorXcd& factor(std::size_t k) const;
  Eigen::VectorXcd& factor_mut(std::size_t k);

  /// Same state as a full amplitude array.
  WaveFunction to_entangled(std::size_t cap = kDefaultAmplitudeCap) const;

  double norm() const;
  void normalize();
  /// Number of amplitudes that are exactly zero.
  std::size_t zero_count() const;

  void check_particle(std::size_t k) const;

 private:
  Mode mode_ = Mode::Product;
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  Eigen::VectorXcd full_;
  std::vector<Eigen::VectorXcd> factors_;
};

/// <a|b>. Both states must have the same shape; product states may be
/// compared with each other or with an entangled state.
Complex overlap(const WaveFunction& a, const WaveFunction& b);

/// |<a|b>|.
double fidelity(const WaveFunction& a, const WaveFunction& b);

/// Each particle in a normalized uniform superposition over `region`.
/// Throws DomainError if the region is empty or out of range, or if an
/// entangled array would exceed `cap` (the message suggests product mode).
WaveFunction init_gas(std::size_t n_particles, std::size_t n_sites, SiteRange region, Mode mode,
                      std::size_t cap = kDefaultAmplitudeCap);

/// |amplitude|^2 of particle k's coordinate summed over all others.
std::vector<double> position_marginal(const WaveFunction& psi, std::size_t k);

/// Sum over particles of the Shannon entropy (nats) of each marginal.
double total_marginal_entropy(const WaveFunction& psi);

/// N times the entropy of the one-body density (1/N) sum_k marginal_k: the
/// entropy of the gas's spatial distribution, blind to which particle is where.
double gas_entropy(const WaveFunction& psi);

}  // namespace arrowlab::grw
