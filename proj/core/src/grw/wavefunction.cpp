#include "arrowlab/grw/wavefunction.hpp"

#include <cmath>

#include <fmt/format.h>

#include "arrowlab/core/coarse_grain.hpp"
#include "arrowlab/core/error.hpp"

namespace arrowlab::grw {
namespace {

// M^N, or 0 if it exceeds `cap`.
std::size_t checked_power(std::size_t m, std::size_t n, std::size_t cap) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > cap / m) return 0;
    total *= m;
  }
  return total <= cap ? total : 0;
}

}  // namespace

WaveFunction WaveFunction::product(std::vector<Eigen::VectorXcd> factors) {
  if (factors.empty()) throw DomainError("product state needs at least one particle");
  WaveFunction psi;
  psi.mode_ = Mode::Product;
  psi.n_ = factors.size();
  psi.m_ = static_cast<std::size_t>(factors.front().size());
  if (psi.m_ == 0) throw DomainError("lattice needs at least one site");
  for (std::size_t k = 0; k < factors.size(); ++k) {
    if (static_cast<std::size_t>(factors[k].size()) != psi.m_) {
      throw DomainError(fmt::format("particle {} has {} sites, expected {}", k, factors[k].size(), psi.m_));
    }
    const double nrm = factors[k].norm();
    if (!(nrm > 0.0)) throw DomainError(fmt::format("particle {} has zero norm", k));
    factors[k] /= nrm;
  }
  psi.factors_ = std::move(factors);
  return psi;
}

WaveFunction WaveFunction::entangled(std::size_t n_particles, std::size_t n_sites, Eigen::VectorXcd amplitudes,
                                     std::size_t cap) {
  if (n_particles == 0 || n_sites == 0) throw DomainError("entangled state needs particles and sites");
  const std::size_t expected = checked_power(n_sites, n_particles, cap);
  if (expected == 0) {
    throw DomainError(fmt::format("entangled state {}^{} exceeds the amplitude cap {}; use product mode", n_sites,
                                  n_particles, cap));
  }
  if (static_cast<std::size_t>(amplitudes.size()) != expected) {
    throw DomainError(fmt::format("entangled state has {} amplitudes, expected {}", amplitudes.size(), expected));
  }
  const double nrm = amplitudes.norm();
  if (!(nrm > 0.0)) throw DomainError("entangled state has zero norm");
  WaveFunction psi;
  psi.mode_ = Mode::Entangled;
  psi.n_ = n_particles;
  psi.m_ = n_sites;
  psi.full_ = amplitudes / nrm;
  return psi;
}

const Eigen::VectorXcd& WaveFunction::amplitudes() const {
  if (mode_ != Mode::Entangled) throw DomainError("amplitudes() requires entangled mode");
  return full_;
}

Eigen::VectorXcd& WaveFunction::amplitudes_mut() {
  if (mode_ != Mode::Entangled) throw DomainError("amplitudes_mut() requires entangled mode");
  return full_;
}

const Eigen::VectorXcd& WaveFunction::factor(std::size_t k) const {
  if (mode_ != Mode::Product) throw DomainError("factor() requires product mode");
  check_particle(k);
  return factors_[k];
}

Eigen::VectorXcd& WaveFunction::factor_mut(std::size_t k) {
  if (mode_ != Mode::Product) throw DomainError("factor_mut() requires product mode");
  check_particle(k);
  return factors_[k];
}

void WaveFunction::check_particle(std::size_t k) const {
  if (k >= n_) throw DomainError(fmt::format("particle index {} out of range (N = {})", k, n_));
}

WaveFunction WaveFunction::to_entangled(std::size_t cap) const {
  if (mode_ == Mode::Entangled) return *this;
  const std::size_t total = checked_power(m_, n_, cap);
  if (total == 0) {
    throw DomainError(fmt::format("cannot expand {}^{} amplitudes within cap {}", m_, n_, cap));
  }
  // Kronecker product with particle 0 most significant.
  Eigen::VectorXcd full = factors_[0];
  for (std::size_t k = 1; k < n_; ++k) {
    Eigen::VectorXcd next(full.size() * static_cast<Eigen::Index>(m_));
    for (Eigen::Index i = 0; i < full.size(); ++i) {
      next.segment(i * static_cast<Eigen::Index>(m_), static_cast<Eigen::Index>(m_)) = full[i] * factors_[k];
    }
    full = std::move(next);
  }
  return entangled(n_, m_, std::move(full), cap);
}

double WaveFunction::norm() const {
  if (mode_ == Mode::Entangled) return full_.norm();
  double nrm = 1.0;
  for (const auto& f : factors_) nrm *= f.norm();
  return nrm;
}

void WaveFunction::normalize() {
  if (mode_ == Mode::Entangled) {
    full_ /= full_.norm();
  } else {
    for (auto& f : factors_) f /= f.norm();
  }
}

std::size_t WaveFunction::zero_count() const {
  std::size_t zeros = 0;
  const auto count = [&](const Eigen::VectorXcd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) zeros += v[i] == Complex{} ? 1 : 0;
  };
  if (mode_ == Mode::Entangled) {
    count(full_);
  } else {
    for (const auto& f : factors_) count(f);
  }
  return zeros;
}

Complex overlap(const WaveFunction& a, const WaveFunction& b) {
  if (a.particles() != b.particles() || a.sites() != b.sites()) throw DomainError("overlap: shape mismatch");
  if (a.mode() == Mode::Product && b.mode() == Mode::Product) {
    Complex prod{1.0, 0.0};
    for (std::size_t k = 0; k < a.particles(); ++k) prod *= a.factor(k).dot(b.factor(k));
    return prod;
  }
  const WaveFunction ea = a.to_entangled();
  const WaveFunction eb = b.to_entangled();
  return ea.amplitudes().dot(eb.amplitudes());  // conjugates the first argument
}

double fidelity(const WaveFunction& a, const WaveFunction& b) { return std::abs(overlap(a, b)); }

WaveFunction init_gas(std::size_t n_particles, std::size_t n_sites, SiteRange region, Mode mode, std::size_t cap) {
  if (n_particles == 0) throw DomainError("init_gas: no particles");
  if (region.first > region.last || region.last >= n_sites) {
    throw DomainError(
        fmt::format("init_gas: region [{}, {}] is empty or outside the {}-site lattice", region.first, region.last,
                    n_sites));
  }
  if (mode == Mode::Entangled && checked_power(n_sites, n_particles, cap) == 0) {
    throw DomainError(fmt::format(
        "init_gas: {} particles on {} sites need {}^{} amplitudes, above the cap of {}; use product mode for "
        "non-interacting gases",
        n_particles, n_sites, n_sites, n_particles, cap));
  }
  Eigen::VectorXcd single = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n_sites));
  const double amp = 1.0 / std::sqrt(static_cast<double>(region.size()));
  for (std::size_t x = region.first; x <= region.last; ++x) single[static_cast<Eigen::Index>(x)] = amp;
  auto psi = WaveFunction::product(std::vector<Eigen::VectorXcd>(n_particles, single));
  return mode == Mode::Entangled ? psi.to_entangled(cap) : psi;
}

std::vector<double> position_marginal(const WaveFunction& psi, std::size_t k) {
  psi.check_particle(k);
  const std::size_t m = psi.sites();
  std::vector<double> p(m, 0.0);
  if (psi.mode() == Mode::Product) {
    const auto& f = psi.factor(k);
    for (std::size_t x = 0; x < m; ++x) p[x] = std::norm(f[static_cast<Eigen::Index>(x)]);
    return p;
  }
  const auto& amps = psi.amplitudes();
  std::size_t inner = 1;
  for (std::size_t j = k + 1; j < psi.particles(); ++j) inner *= m;
  const std::size_t block = inner * m;
  const auto total = static_cast<std::size_t>(amps.size());
  for (std::size_t base = 0; base < total; base += block) {
    for (std::size_t x = 0; x < m; ++x) {
      double acc = 0.0;
      const std::size_t off = base + x * inner;
      for (std::size_t i = 0; i < inner; ++i) acc += std::norm(amps[static_cast<Eigen::Index>(off + i)]);
      p[x] += acc;
    }
  }
  return p;
}

double total_marginal_entropy(const WaveFunction& psi) {
  double s = 0.0;
  for (std::size_t k = 0; k < psi.particles(); ++k) s += core::shannon_entropy(position_marginal(psi, k));
  return s;
}

double gas_entropy(const WaveFunction& psi) {
  std::vector<double> density(psi.sites(), 0.0);
  const double n = static_cast<double>(psi.particles());
  for (std::size_t k = 0; k < psi.particles(); ++k) {
    const auto p = position_marginal(psi, k);
    for (std::size_t x = 0; x < p.size(); ++x) density[x] += p[x] / n;
  }
  return n * core::shannon_entropy(density);
}

}  // namespace arrowlab::grw
