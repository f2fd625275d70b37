#include "arrowlab/grw/collapse.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "arrowlab/core/error.hpp"

namespace arrowlab::grw {
namespace {

void check_width(double width) {
  if (!(width > 0.0) || !std::isfinite(width)) throw DomainError(fmt::format("Gaussian width must be > 0, got {}", width));
}

// Multiplies coordinate k by the per-site factors g[x].
void scale_axis(WaveFunction& psi, std::size_t k, const std::vector<double>& g) {
  const std::size_t m = psi.sites();
  if (psi.mode() == Mode::Product) {
    auto& f = psi.factor_mut(k);
    for (std::size_t x = 0; x < m; ++x) f[static_cast<Eigen::Index>(x)] *= g[x];
    return;
  }
  auto& amps = psi.amplitudes_mut();
  std::size_t inner = 1;
  for (std::size_t j = k + 1; j < psi.particles(); ++j) inner *= m;
  const std::size_t block = inner * m;
  for (std::size_t base = 0; base < static_cast<std::size_t>(amps.size()); base += block) {
    for (std::size_t x = 0; x < m; ++x) {
      const std::size_t off = base + x * inner;
      for (std::size_t i = 0; i < inner; ++i) amps[static_cast<Eigen::Index>(off + i)] *= g[x];
    }
  }
}

}  // namespace

void GrwParams::validate() const {
  if (!(hit_prob_per_particle_per_step >= 0.0 && hit_prob_per_particle_per_step <= 1.0)) {
    throw DomainError(fmt::format("hit probability {} is not in [0, 1]", hit_prob_per_particle_per_step));
  }
  check_width(gaussian_width);
}

std::vector<double> hit_center_distribution(const WaveFunction& psi, std::size_t k, double width) {
  check_width(width);
  const auto rho = position_marginal(psi, k);
  const std::size_t m = rho.size();
  // ||G_a psi||^2 = sum_x exp(-(x - a)^2 / (2 width)) rho(x)
  std::vector<double> p(m, 0.0);
  double total = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    double acc = 0.0;
    for (std::size_t x = 0; x < m; ++x) {
      if (rho[x] == 0.0) continue;
      const double d = static_cast<double>(x) - static_cast<double>(a);
      acc += std::exp(-d * d / (2.0 * width)) * rho[x];
    }
    p[a] = acc;
    total += acc;
  }
  for (double& v : p) v /= total;
  return p;
}

WaveFunction apply_hit(WaveFunction psi, std::size_t k, std::size_t a, double width) {
  psi.check_particle(k);
  check_width(width);
  const std::size_t m = psi.sites();
  if (a >= m) throw DomainError(fmt::format("hit center {} outside the {}-site lattice", a, m));
  const auto rho = position_marginal(psi, k);

  // Shift exponents so the largest factor on the support is exactly 1: the
  // renormalization absorbs the Gaussian's prefactor anyway.
  std::vector<double> expo(m);
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < m; ++x) {
    const double d = static_cast<double>(x) - static_cast<double>(a);
    expo[x] = -d * d / (4.0 * width);
    if (rho[x] > 0.0) shift = std::max(shift, expo[x]);
  }
  std::vector<double> g(m);
  for (std::size_t x = 0; x < m; ++x) g[x] = std::exp(expo[x] - shift);
  scale_axis(psi, k, g);
  psi.normalize();
  return psi;
}

std::pair<WaveFunction, std::vector<HitEvent>> maybe_hit(WaveFunction psi, const GrwParams& params,
                                                         std::int64_t step, core::RngStream& rng) {
  params.validate();
  std::vector<HitEvent> events;
  for (std::size_t k = 0; k < psi.particles(); ++k) {
    if (!(rng.uniform() < params.hit_prob_per_particle_per_step)) continue;
    const auto p = hit_center_distribution(psi, k, params.gaussian_width);
    const std::size_t a = rng.categorical(p);
    psi = apply_hit(std::move(psi), k, a, params.gaussian_width);
    events.push_back({step, k, a});
  }
  return {std::move(psi), std::move(events)};
}

namespace {

GrwRecord diagnostics(const WaveFunction& psi, const LatticeHamiltonian& h, std::int64_t step, std::size_t hits) {
  return {step, total_marginal_entropy(psi), gas_entropy(psi), energy(psi, h), psi.norm(), hits};
}

}  // namespace

GrwTrajectory run(const WaveFunction& psi0, const LatticeHamiltonian& h, const GrwParams& params,
                  std::int64_t n_steps, double dt, core::RngStream& rng) {
  if (n_steps < 0) throw DomainError("run: negative step count");
  params.validate();
  GrwTrajectory traj;
  traj.records.push_back(diagnostics(psi0, h, 0, 0));
  WaveFunction psi = psi0;
  if (n_steps == 0) {
    traj.final_state = std::move(psi);
    return traj;
  }
  const Propagator prop(h, dt);
  for (std::int64_t t = 1; t <= n_steps; ++t) {
    prop.apply(psi);
    auto [next, events] = maybe_hit(std::move(psi), params, t, rng);
    psi = std::move(next);
    traj.records.push_back(diagnostics(psi, h, t, events.size()));
    traj.hits.insert(traj.hits.end(), events.begin(), events.end());
  }
  traj.final_state = std::move(psi);
  return traj;
}

WaveFunction reverse_run(const WaveFunction& final_state, const LatticeHamiltonian& h, double dt,
                         std::int64_t n_steps, const std::vector<HitEvent>& hit_log, double width, ReverseMode mode,
                         std::optional<ResampleOptions> resample) {
  if (n_steps < 0) throw DomainError("reverse_run: negative step count");
  check_width(width);
  for (std::size_t i = 0; i < hit_log.size(); ++i) {
    const auto& e = hit_log[i];
    if (e.step < 1 || e.step > n_steps) {
      throw DomainError(fmt::format("reverse_run: hit {} at step {} outside a {}-step run", i, e.step, n_steps));
    }
    if (i > 0 && e.step < hit_log[i - 1].step) throw DomainError("reverse_run: hit log is not in step order");
    if (e.particle >= final_state.particles() || e.center >= final_state.sites()) {
      throw DomainError(fmt::format("reverse_run: hit {} names particle {} / center {} outside the state", i,
                                   e.particle, e.center));
    }
  }
  if (mode == ReverseMode::ResampleHits && (!resample || resample->rng == nullptr)) {
    throw DomainError("reverse_run: resampling needs parameters and a random stream");
  }

  WaveFunction psi = final_state;
  if (n_steps == 0) return psi;
  const Propagator prop(h, dt);
  auto next_hit = hit_log.rbegin();
  for (std::int64_t t = n_steps; t >= 1; --t) {
    if (mode == ReverseMode::ReplayHits) {
      for (; next_hit != hit_log.rend() && next_hit->step == t; ++next_hit) {
        psi = apply_hit(std::move(psi), next_hit->particle, next_hit->center, width);
      }
    } else {
      auto [next, events] = maybe_hit(std::move(psi), resample->params, t, *resample->rng);
      psi = std::move(next);
    }
    prop.apply_inverse(psi);
  }
  return psi;
}

void write_trajectory_csv(std::ostream& out, const GrwTrajectory& t) {
  out << "step,entropy,energy,norm,hits_this_step\n";
  for (const auto& r : t.records) out << fmt::format("{},{},{},{},{}\n", r.step, r.entropy, r.energy, r.norm, r.hits);
}

void write_hit_log_csv(std::ostream& out, const std::vector<HitEvent>& hits) {
  out << "step,particle,center\n";
  for (const auto& h : hits) out << h.step << ',' << h.particle << ',' << h.center << '\n';
}

std::vector<HitEvent> read_hit_log_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "step,particle,center") throw ConfigError("hit log CSV: missing header");
  std::vector<HitEvent> hits;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string f[3];
    for (auto& field : f) {
      if (!std::getline(ss, field, ',')) throw ConfigError(fmt::format("hit log CSV: short line {}", lineno));
    }
    try {
      hits.push_back({std::stoll(f[0]), static_cast<std::size_t>(std::stoull(f[1])),
                      static_cast<std::size_t>(std::stoull(f[2]))});
    } catch (const std::logic_error&) {
      throw ConfigError(fmt::format("hit log CSV: bad number on line {}", lineno));
    }
  }
  return hits;
}

}  // namespace arrowlab::grw
