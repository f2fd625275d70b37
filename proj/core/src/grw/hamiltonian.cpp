#include "arrowlab/grw/hamiltonian.hpp"

#include <cmath>

#include <fmt/format.h>

#include "arrowlab/core/error.hpp"

namespace arrowlab::grw {
namespace {

using RowMajorBlock = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void check_compatible(const WaveFunction& psi, const LatticeHamiltonian& h) {
  if (psi.sites() != h.sites()) {
    throw DomainError(fmt::format("dimension mismatch: state has {} sites, Hamiltonian {}", psi.sites(), h.sites()));
  }
  if (h.interaction != 0.0 && psi.mode() == Mode::Product) {
    throw DomainError("interactions require entangled mode");
  }
}

// Number of particle pairs sharing a site, per amplitude index.
std::size_t coincident_pairs(std::size_t index, std::size_t n, std::size_t m, std::vector<std::size_t>& coords) {
  for (std::size_t k = n; k-- > 0;) {
    coords[k] = index % m;
    index /= m;
  }
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) pairs += coords[a] == coords[b] ? 1 : 0;
  }
  return pairs;
}

}  // namespace

LatticeHamiltonian LatticeHamiltonian::free(std::size_t n_sites, double hopping, Boundary boundary) {
  if (n_sites == 0) throw DomainError("Hamiltonian needs at least one site");
  return LatticeHamiltonian{hopping, std::vector<double>(n_sites, 0.0), boundary, 0.0};
}

Eigen::MatrixXd LatticeHamiltonian::single_particle_matrix() const {
  const auto m = static_cast<Eigen::Index>(sites());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index x = 0; x < m; ++x) h(x, x) = onsite[static_cast<std::size_t>(x)];
  for (Eigen::Index x = 0; x + 1 < m; ++x) {
    h(x, x + 1) -= hopping;
    h(x + 1, x) -= hopping;
  }
  if (boundary == Boundary::Periodic && m > 2) {
    h(0, m - 1) -= hopping;
    h(m - 1, 0) -= hopping;
  }
  return h;
}

Eigen::VectorXcd LatticeHamiltonian::apply_single(const Eigen::VectorXcd& v) const {
  const auto m = static_cast<Eigen::Index>(sites());
  Eigen::VectorXcd out(m);
  for (Eigen::Index x = 0; x < m; ++x) {
    Complex acc = onsite[static_cast<std::size_t>(x)] * v[x];
    if (x > 0) acc -= hopping * v[x - 1];
    if (x + 1 < m) acc -= hopping * v[x + 1];
    out[x] = acc;
  }
  if (boundary == Boundary::Periodic && m > 2) {
    out[0] -= hopping * v[m - 1];
    out[m - 1] -= hopping * v[0];
  }
  return out;
}

Propagator::Propagator(const LatticeHamiltonian& h, double dt) : h_(h), dt_(dt) {
  if (!(dt > 0.0)) throw DomainError("unitary step needs dt > 0");
  if (h.sites() == 0) throw DomainError("Hamiltonian needs at least one site");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h.single_particle_matrix());
  const Eigen::MatrixXcd q = eig.eigenvectors().cast<Complex>();
  Eigen::VectorXcd phases(eig.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) phases[i] = std::polar(1.0, -eig.eigenvalues()[i] * dt);
  u_ = q * phases.asDiagonal() * q.adjoint();
  u_adjoint_ = u_.adjoint();
}

void apply_on_axis(Eigen::VectorXcd& amplitudes, std::size_t n_particles, std::size_t n_sites, std::size_t k,
                   const Eigen::MatrixXcd& op) {
  std::size_t inner = 1;
  for (std::size_t j = k + 1; j < n_particles; ++j) inner *= n_sites;
  const std::size_t block = inner * n_sites;
  const auto rows = static_cast<Eigen::Index>(n_sites);
  const auto cols = static_cast<Eigen::Index>(inner);
  RowMajorBlock scratch(rows, cols);
  for (std::size_t base = 0; base < static_cast<std::size_t>(amplitudes.size()); base += block) {
    Eigen::Map<RowMajorBlock> view(amplitudes.data() + base, rows, cols);
    scratch.noalias() = op * view;
    view = scratch;
  }
}

void Propagator::apply_interaction_phase(WaveFunction& psi, double sign) const {
  if (h_.interaction == 0.0) return;
  auto& amps = psi.amplitudes_mut();
  std::vector<std::size_t> coords(psi.particles());
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    const auto pairs = coincident_pairs(static_cast<std::size_t>(i), psi.particles(), psi.sites(), coords);
    if (pairs != 0) amps[i] *= std::polar(1.0, -sign * h_.interaction * static_cast<double>(pairs) * dt_);
  }
}

void Propagator::apply(WaveFunction& psi) const {
  check_compatible(psi, h_);
  if (psi.mode() == Mode::Product) {
    for (std::size_t k = 0; k < psi.particles(); ++k) {
      auto& f = psi.factor_mut(k);
      f = (u_ * f).eval();
    }
    return;
  }
  for (std::size_t k = 0; k < psi.particles(); ++k) {
    apply_on_axis(psi.amplitudes_mut(), psi.particles(), psi.sites(), k, u_);
  }
  apply_interaction_phase(psi, +1.0);
}

void Propagator::apply_inverse(WaveFunction& psi) const {
  check_compatible(psi, h_);
  if (psi.mode() == Mode::Product) {
    for (std::size_t k = 0; k < psi.particles(); ++k) {
      auto& f = psi.factor_mut(k);
      f = (u_adjoint_ * f).eval();
    }
    return;
  }
  apply_interaction_phase(psi, -1.0);
  for (std::size_t k = psi.particles(); k-- > 0;) {
    apply_on_axis(psi.amplitudes_mut(), psi.particles(), psi.sites(), k, u_adjoint_);
  }
}

WaveFunction unitary_step(WaveFunction psi, const LatticeHamiltonian& h, double dt) {
  check_compatible(psi, h);
  Propagator(h, dt).apply(psi);
  return psi;
}

double energy(const WaveFunction& psi, const LatticeHamiltonian& h) {
  check_compatible(psi, h);
  double e = 0.0;
  if (psi.mode() == Mode::Product) {
    for (std::size_t k = 0; k < psi.particles(); ++k) {
      const auto& f = psi.factor(k);
      e += f.dot(h.apply_single(f)).real();
    }
    return e;
  }
  const Eigen::MatrixXcd h1 = h.single_particle_matrix().cast<Complex>();
  for (std::size_t k = 0; k < psi.particles(); ++k) {
    Eigen::VectorXcd hv = psi.amplitudes();
    apply_on_axis(hv, psi.particles(), psi.sites(), k, h1);
    e += psi.amplitudes().dot(hv).real();
  }
  if (h.interaction != 0.0) {
    const auto& amps = psi.amplitudes();
    std::vector<std::size_t> coords(psi.particles());
    for (Eigen::Index i = 0; i < amps.size(); ++i) {
      const auto pairs = coincident_pairs(static_cast<std::size_t>(i), psi.particles(), psi.sites(), coords);
      e += h.interaction * static_cast<double>(pairs) * std::norm(amps[i]);
    }
  }
  return e;
}

}  // namespace arrowlab::grw
