#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "arrowlab/core/error.hpp"
#include "arrowlab/core/rng.hpp"
#include "arrowlab/grw/collapse.hpp"
#include "oracles.hpp"

using namespace arrowlab::grw;
using arrowlab::DomainError;
namespace oracle = arrowlab::oracle;
using arrowlab::core::rng_stream;

namespace {

Eigen::VectorXcd random_vector(std::mt19937_64& g, std::size_t m) {
  std::normal_distribution<double> d;
  Eigen::VectorXcd v(m);
  for (std::size_t i = 0; i < m; ++i) v[i] = {d(g), d(g)};
  return v / v.norm();
}

std::vector<Complex> full(const WaveFunction& psi) {
  const auto e = psi.to_entangled();
  return {e.amplitudes().data(), e.amplitudes().data() + e.amplitudes().size()};
}

WaveFunction two_peak(std::size_t m, std::size_t s1, std::size_t s2) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(m);
  v[s1] = 1.0;
  v[s2] = 1.0;
  return WaveFunction::product({v});
}

}  // namespace

TEST(HitCenters, LocalizedState) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(10);
  v[4] = 1.0;
  const auto p = hit_center_distribution(WaveFunction::product({v}), 0, 0.01);
  EXPECT_NEAR(p[4], 1.0, 1e-12);
  for (std::size_t a = 0; a < 10; ++a) {
    if (a != 4) {
      EXPECT_LT(p[a], 1e-6);
    }
  }
}

TEST(HitCenters, SymmetricTwoPeak) {
  const auto p = hit_center_distribution(two_peak(20, 5, 14), 0, 0.01);
  EXPECT_NEAR(p[5], 0.5, 1e-12);
  EXPECT_NEAR(p[14], 0.5, 1e-12);
}

TEST(HitCenters, MatchesBruteForceOracle) {
  std::mt19937_64 g(10);
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 1 + t % 3;
    const std::size_t m = 4 + t % 4;
    const double w = 0.5 + t;
    const auto psi = t % 2 ? WaveFunction::entangled(n, m, random_vector(g, static_cast<std::size_t>(std::pow(m, n))))
                           : WaveFunction::product(std::vector<Eigen::VectorXcd>(n, random_vector(g, m)));
    for (std::size_t k = 0; k < n; ++k) {
      const auto got = hit_center_distribution(psi, k, w);
      const auto want = oracle::born_weights(full(psi), n, m, k, 2.0 * w);
      for (std::size_t a = 0; a < m; ++a) EXPECT_NEAR(got[a], want[a], 1e-12);
      EXPECT_NEAR(std::accumulate(got.begin(), got.end(), 0.0), 1.0, 1e-15);
    }
  }
}

TEST(HitCenters, GlobalPhaseInvariant) {
  std::mt19937_64 g(11);
  const auto v = random_vector(g, 9);
  const auto a = hit_center_distribution(WaveFunction::product({v}), 0, 2.0);
  const auto b = hit_center_distribution(WaveFunction::product({Eigen::VectorXcd(v * std::polar(1.0, 2.1))}), 0, 2.0);
  for (std::size_t i = 0; i < 9; ++i) EXPECT_NEAR(a[i], b[i], 1e-15);
}

TEST(ApplyHit, VeryWideGaussianIsIdentity) {
  std::mt19937_64 g(12);
  const auto psi = WaveFunction::product({random_vector(g, 16)});
  const auto out = apply_hit(psi, 0, 3, 1e6 * 16 * 16);
  EXPECT_GT(fidelity(psi, out), 1.0 - 1e-6);
}

TEST(ApplyHit, NarrowHitKeepsTails) {
  const auto psi = two_peak(20, 5, 15);
  const auto out = apply_hit(psi, 0, 5, 1.0);
  const auto m = position_marginal(out, 0);
  EXPECT_GT(m[5], 0.999);
  EXPECT_GT(std::abs(out.factor(0)[15]), 0.0);
  EXPECT_NEAR(out.norm(), 1.0, 1e-12);
}

TEST(ApplyHit, PosteriorMatchesGaussianMultiplication) {
  const auto psi = two_peak(12, 4, 7);
  const double w = 2.0;
  const auto out = apply_hit(psi, 0, 5, w);
  // Eq-2 form with Delta = 2w.
  const double g4 = std::exp(-1.0 / (2.0 * 2.0 * w));
  const double g7 = std::exp(-4.0 / (2.0 * 2.0 * w));
  EXPECT_NEAR(std::abs(out.factor(0)[4]) / std::abs(out.factor(0)[7]), g4 / g7, 1e-12);
}

TEST(ApplyHit, EntangledHitActsOnOneCoordinate) {
  std::mt19937_64 g(13);
  const auto psi = WaveFunction::entangled(2, 5, random_vector(g, 25));
  const auto out = apply_hit(psi, 1, 2, 0.7);
  for (std::size_t i = 0; i < 25; ++i) {
    const double d = static_cast<double>(i % 5) - 2.0;
    const double ratio = std::abs(out.amplitudes()[i]) / std::abs(psi.amplitudes()[i]);
    const double ref = std::abs(out.amplitudes()[2]) / std::abs(psi.amplitudes()[2]);
    EXPECT_NEAR(ratio / ref, std::exp(-d * d / (4 * 0.7)), 1e-12);
  }
}

TEST(ApplyHit, NeverCreatesZerosAboveUnderflow) {
  std::mt19937_64 g(14);
  for (int t = 0; t < 50; ++t) {
    const auto psi = WaveFunction::entangled(2, 8, random_vector(g, 64));
    const auto out = apply_hit(psi, t % 2, t % 8, 0.5 + 0.1 * t);
    EXPECT_EQ(out.zero_count(), psi.zero_count());
  }
}

TEST(ApplyHit, Errors) {
  const auto psi = two_peak(8, 1, 2);
  EXPECT_THROW(apply_hit(psi, 1, 0, 1.0), DomainError);
  EXPECT_THROW(apply_hit(psi, 0, 8, 1.0), DomainError);
  EXPECT_THROW(apply_hit(psi, 0, 0, 0.0), DomainError);
}

TEST(MaybeHit, ZeroRateNeverHits) {
  auto rng = rng_stream(1, 0);
  const auto psi = init_gas(5, 8, {0, 3}, Mode::Product);
  for (int s = 0; s < 100; ++s) {
    auto [out, events] = maybe_hit(psi, {0.0, 3.0}, s, rng);
    EXPECT_TRUE(events.empty());
    for (std::size_t k = 0; k < 5; ++k) EXPECT_EQ(out.factor(k), psi.factor(k));
  }
}

TEST(MaybeHit, UnitRateHitsEveryParticleInOrder) {
  auto rng = rng_stream(2, 0);
  auto psi = init_gas(3, 8, {0, 7}, Mode::Product);
  for (int s = 1; s <= 10; ++s) {
    auto [out, events] = maybe_hit(psi, {1.0, 3.0}, s, rng);
    ASSERT_EQ(events.size(), 3u);
    for (std::size_t k = 0; k < 3; ++k) {
      EXPECT_EQ(events[k].particle, k);
      EXPECT_EQ(events[k].step, s);
    }
    psi = out;
  }
}

// Binomial(10^5, 0.01): mean 1000, sd 31.5.
TEST(MaybeHit, HitCountIsBinomial) {
  auto rng = rng_stream(3, 0);
  auto psi = init_gas(100, 6, {0, 5}, Mode::Product);
  std::size_t hits = 0;
  for (int s = 1; s <= 1000; ++s) {
    auto [out, events] = maybe_hit(std::move(psi), {0.01, 3.0}, s, rng);
    psi = std::move(out);
    hits += events.size();
  }
  EXPECT_NEAR(static_cast<double>(hits), 1000.0, 100.0);
}

TEST(MaybeHit, RejectsInvalidParameters) {
  auto rng = rng_stream(3, 0);
  const auto psi = init_gas(1, 4, {0, 1}, Mode::Product);
  EXPECT_THROW(maybe_hit(psi, {1.5, 3.0}, 0, rng), DomainError);
  EXPECT_THROW(maybe_hit(psi, {0.5, -1.0}, 0, rng), DomainError);
}

TEST(Run, ZeroStepsHasOneRecord) {
  auto rng = rng_stream(4, 0);
  const auto psi = init_gas(2, 8, {0, 3}, Mode::Product);
  const auto t = run(psi, LatticeHamiltonian::free(8), {}, 0, 0.5, rng);
  ASSERT_EQ(t.records.size(), 1u);
  EXPECT_NEAR(t.records[0].entropy, 2 * std::log(4.0), 1e-12);
  EXPECT_TRUE(t.hits.empty());
}

TEST(Run, RecordsEveryStepAndKeepsNorm) {
  auto rng = rng_stream(5, 0);
  const auto psi = init_gas(4, 16, {0, 7}, Mode::Product);
  const auto t = run(psi, LatticeHamiltonian::free(16), {0.2, 2.0}, 100, 0.5, rng);
  ASSERT_EQ(t.records.size(), 101u);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    EXPECT_EQ(t.records[i].step, static_cast<std::int64_t>(i));
    EXPECT_NEAR(t.records[i].norm, 1.0, 1e-9);
    hits += t.records[i].hits;
  }
  EXPECT_EQ(hits, t.hits.size());
  EXPECT_GT(hits, 0u);
}

TEST(Run, DeterministicForSeed) {
  const auto psi = init_gas(3, 12, {0, 5}, Mode::Product);
  auto r1 = rng_stream(6, 3);
  auto r2 = rng_stream(6, 3);
  const auto a = run(psi, LatticeHamiltonian::free(12), {0.1, 3.0}, 200, 0.5, r1);
  const auto b = run(psi, LatticeHamiltonian::free(12), {0.1, 3.0}, 200, 0.5, r2);
  EXPECT_EQ(a.hits, b.hits);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(a.final_state.factor(k), b.final_state.factor(k));
}

TEST(ReverseRun, CollapseFreeIsReversible) {
  auto rng = rng_stream(7, 0);
  for (auto mode : {Mode::Product, Mode::Entangled}) {
    const auto psi = init_gas(3, 10, {0, 4}, mode);
    const auto h = LatticeHamiltonian::free(10, 1.0, Boundary::Periodic);
    const auto t = run(psi, h, {0.0, 3.0}, 300, 0.5, rng);
    const auto back = reverse_run(t.final_state, h, 0.5, 300, t.hits, 3.0);
    EXPECT_GE(fidelity(back, psi), 1.0 - 1e-9);
  }
}

// Two sites, equal superposition, one very narrow hit on site 0 with no
// hopping: the retrodicted state is |0>, whose overlap with the start is 1/sqrt 2.
TEST(ReverseRun, SingleNarrowHitOnTwoSites) {
  const auto psi = two_peak(2, 0, 1);
  const auto h = LatticeHamiltonian::free(2, 0.0);
  const std::vector<HitEvent> log{{1, 0, 0}};
  const auto forward = apply_hit(unitary_step(psi, h, 1.0), 0, 0, 0.01);
  const auto back = reverse_run(forward, h, 1.0, 1, log, 0.01);
  EXPECT_NEAR(fidelity(back, psi), 1.0 / std::sqrt(2.0), 1e-9);
  EXPECT_LT(fidelity(back, psi), 0.9);
}

TEST(ReverseRun, ValidatesLog) {
  const auto psi = two_peak(4, 0, 1);
  const auto h = LatticeHamiltonian::free(4);
  EXPECT_THROW(reverse_run(psi, h, 0.5, 3, {{4, 0, 0}}, 1.0), DomainError);
  EXPECT_THROW(reverse_run(psi, h, 0.5, 3, {{0, 0, 0}}, 1.0), DomainError);
  EXPECT_THROW(reverse_run(psi, h, 0.5, 3, {{2, 0, 0}, {1, 0, 0}}, 1.0), DomainError);
  EXPECT_THROW(reverse_run(psi, h, 0.5, 3, {{2, 1, 0}}, 1.0), DomainError);
  EXPECT_THROW(reverse_run(psi, h, 0.5, 3, {{2, 0, 4}}, 1.0), DomainError);
  EXPECT_THROW(reverse_run(psi, h, 0.5, 3, {}, 1.0, ReverseMode::ResampleHits), DomainError);
}

TEST(ReverseRun, ResampleModeDrawsFreshHits) {
  auto rng = rng_stream(8, 0);
  const auto psi = init_gas(2, 8, {0, 3}, Mode::Product);
  const auto h = LatticeHamiltonian::free(8);
  const auto t = run(psi, h, {0.0, 3.0}, 50, 0.5, rng);
  auto back_rng = rng_stream(8, 1);
  const auto back = reverse_run(t.final_state, h, 0.5, 50, t.hits, 3.0, ReverseMode::ResampleHits,
                                ResampleOptions{{1.0, 3.0}, &back_rng});
  EXPECT_NEAR(back.norm(), 1.0, 1e-9);
  EXPECT_LT(fidelity(back, psi), 1.0 - 1e-3);
}

TEST(Csv, TrajectoryAndHitLog) {
  auto rng = rng_stream(9, 0);
  const auto t = run(init_gas(2, 8, {0, 3}, Mode::Product), LatticeHamiltonian::free(8), {0.3, 1.0}, 20, 0.5, rng);
  std::ostringstream traj;
  write_trajectory_csv(traj, t);
  const std::string text = traj.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "step,entropy,energy,norm,hits_this_step");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 22);
  std::stringstream hits;
  write_hit_log_csv(hits, t.hits);
  EXPECT_EQ(hits.str().substr(0, 20), "step,particle,center");
  EXPECT_EQ(read_hit_log_csv(hits), t.hits);
}
