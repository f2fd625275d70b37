#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "arrowlab/core/coarse_grain.hpp"
#include "arrowlab/core/error.hpp"

using namespace arrowlab::core;
using arrowlab::DomainError;

TEST(CoarseGraining, CellCountIsCeilingProduct) {
  const CoarseGraining g(3.0, 10.0, 7.0);
  EXPECT_EQ(g.columns(), 4u);
  EXPECT_EQ(g.rows(), 3u);
  EXPECT_EQ(g.cell_count(), 12u);
  const auto u = CoarseGraining::uniform_grid(56.0, 56.0, 8, 8);
  EXPECT_EQ(u.cell_count(), 64u);
  EXPECT_DOUBLE_EQ(u.cell_size(), 7.0);
  EXPECT_THROW(CoarseGraining::uniform_grid(56.0, 56.0, 8, 4), DomainError);
}

TEST(CoarseGraining, EveryInBoxPointHasExactlyOneCell) {
  const CoarseGraining g(3.0, 10.0, 7.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ux(0.0, 10.0), uy(0.0, 7.0);
  for (int i = 0; i < 5000; ++i) {
    const Point2 p{ux(rng), uy(rng)};
    const auto c = g.cell_of(p);
    ASSERT_LT(c, g.cell_count());
    const auto col = c % g.columns();
    const auto row = c / g.columns();
    // The cell's rectangle (last column/row extended to the wall) contains p.
    EXPECT_GE(p.x, col * 3.0);
    EXPECT_GE(p.y, row * 3.0);
    if (col + 1 < g.columns()) {
      EXPECT_LT(p.x, (col + 1) * 3.0);
    }
    if (row + 1 < g.rows()) {
      EXPECT_LT(p.y, (row + 1) * 3.0);
    }
  }
  EXPECT_EQ(g.cell_of({10.0, 7.0}), g.cell_count() - 1);
  EXPECT_EQ(g.cell_of({0.0, 0.0}), 0u);
  EXPECT_THROW(g.cell_of({10.5, 1.0}), DomainError);
  EXPECT_THROW(g.cell_of({-0.1, 1.0}), DomainError);
}

TEST(CoarseGrain, AllInOneCell) {
  const auto g = CoarseGraining::uniform_grid(2.0, 2.0, 2, 2);
  const std::vector<Point2> pts{{0.1, 0.1}, {0.2, 0.5}, {0.9, 0.9}, {0.5, 0.3}};
  const auto h = coarse_grain(pts, g);
  EXPECT_EQ(h, Histogram(std::vector<std::uint64_t>{4, 0, 0, 0}));
  EXPECT_EQ(h.total(), 4u);
  EXPECT_EQ(entropy(h), 0.0);
}

TEST(CoarseGrain, OnePerCell) {
  const auto g = CoarseGraining::uniform_grid(2.0, 2.0, 2, 2);
  const std::vector<Point2> pts{{0.5, 0.5}, {1.5, 0.5}, {0.5, 1.5}, {1.5, 1.5}};
  const auto h = coarse_grain(pts, g);
  EXPECT_EQ(h, Histogram(std::vector<std::uint64_t>{1, 1, 1, 1}));
  EXPECT_NEAR(entropy(h), std::log(4.0), 1e-15);
}

TEST(CoarseGrain, OutsidePointNamesIndex) {
  const auto g = CoarseGraining::uniform_grid(2.0, 2.0, 2, 2);
  const std::vector<Point2> pts{{0.5, 0.5}, {1.5, 0.5}, {2.5, 0.5}};
  try {
    coarse_grain(pts, g);
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("position 2"), std::string::npos) << e.what();
  }
}

TEST(Entropy, ReferenceValues) {
  std::vector<std::uint64_t> uniform(16, 1);
  EXPECT_NEAR(entropy(Histogram(uniform)), 2.772588722239781, 1e-12);
  EXPECT_NEAR(entropy(Histogram(std::vector<std::uint64_t>{8, 8})), 0.6931471805599453, 1e-15);
  EXPECT_EQ(entropy(Histogram(std::vector<std::uint64_t>{0, 16, 0})), 0.0);
  EXPECT_THROW(entropy(Histogram(5)), DomainError);
}

class EntropyProperties : public ::testing::Test {
 protected:
  std::vector<std::uint64_t> random_counts(std::size_t cells) {
    std::uniform_int_distribution<std::uint64_t> d(0, 9);
    std::vector<std::uint64_t> c(cells);
    for (auto& v : c) v = d(rng_);
    if (std::accumulate(c.begin(), c.end(), std::uint64_t{0}) == 0) c[0] = 1;
    return c;
  }
  std::mt19937_64 rng_{99};
};

TEST_F(EntropyProperties, BoundedByLogMinOfNAndC) {
  for (int t = 0; t < 500; ++t) {
    const auto c = random_counts(1 + t % 20);
    const Histogram h(c);
    const double s = entropy(h);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, std::log(static_cast<double>(std::min<std::uint64_t>(h.total(), c.size()))) + 1e-12);
  }
}

TEST_F(EntropyProperties, PermutationInvariantAndEmptyCellsIrrelevant) {
  for (int t = 0; t < 200; ++t) {
    auto c = random_counts(12);
    const double s = entropy(Histogram(c));
    std::shuffle(c.begin(), c.end(), rng_);
    EXPECT_NEAR(entropy(Histogram(c)), s, 1e-12);
    c.push_back(0);
    c.insert(c.begin(), 0);
    EXPECT_NEAR(entropy(Histogram(c)), s, 1e-12);
  }
}

TEST_F(EntropyProperties, MergingLosesAtMostLogFactor) {
  for (int t = 0; t < 200; ++t) {
    const Histogram fine(random_counts(24));
    for (std::size_t f : {2u, 3u, 4u, 6u}) {
      const auto coarse = fine.merged(f);
      EXPECT_EQ(coarse.total(), fine.total());
      EXPECT_LE(entropy(coarse), entropy(fine) + 1e-12);
      EXPECT_LE(entropy(fine), entropy(coarse) + std::log(static_cast<double>(f)) + 1e-12);
    }
    EXPECT_EQ(entropy(fine.merged(24)), 0.0);
  }
}

TEST(EntropyTranslation, ShiftByWholeCellsPreservesEntropy) {
  const CoarseGraining g(7.0, 56.0, 56.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 28.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<Point2> pts(16);
    for (auto& p : pts) p = {u(rng), u(rng)};
    const double s = entropy(coarse_grain(pts, g));
    for (int k = 1; k <= 3; ++k) {
      auto shifted = pts;
      for (auto& p : shifted) p = {p.x + 7.0 * k, p.y + 7.0 * (k - 1)};
      EXPECT_NEAR(entropy(coarse_grain(shifted, g)), s, 1e-12);
    }
  }
}

TEST(Histogram, SumOfCountsIsTotal) {
  Histogram h(5);
  h.add(1);
  h.add(4, 3);
  h.add(1);
  EXPECT_EQ(h.total(), 5u);
  EXPECT_EQ(std::accumulate(h.counts().begin(), h.counts().end(), std::uint64_t{0}), h.total());
  EXPECT_THROW(h.add(5), DomainError);
}

TEST(Histogram, Csv) {
  std::ostringstream out;
  Histogram(std::vector<std::uint64_t>{2, 0, 1}).write_csv(out);
  EXPECT_EQ(out.str(), "cell_index,count\n0,2\n1,0\n2,1\n");
}

TEST(ShannonEntropy, MatchesHistogramEntropy) {
  const std::vector<double> p{0.5, 0.25, 0.25, 0.0};
  EXPECT_NEAR(shannon_entropy(p), 1.5 * std::log(2.0), 1e-15);
}
