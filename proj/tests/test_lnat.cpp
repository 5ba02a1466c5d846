#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "dcaw/errors.hpp"
#include "dcaw/lnat_system.hpp"
#include "dcaw/norms.hpp"
#include "oracles.hpp"

using namespace dcaw;

namespace {

// {p ∈ Z² : p_1 - p_0 <= 0}
LNatSystem diagonal_halfplane() {
  return LNatSystem(2, {std::nullopt, std::nullopt}, {std::nullopt, std::nullopt}, {{0, 1, 0}});
}

}  // namespace

TEST(Contains, DifferenceConstraint) {
  const LNatSystem s = diagonal_halfplane();
  EXPECT_TRUE(s.contains(IntVector{1, 1}));
  EXPECT_FALSE(s.contains(IntVector{0, 3}));
}

TEST(Contains, BoxViolation) {
  const LNatSystem s = LNatSystem::box({Bound{0}, Bound{0}}, {Bound{4}, Bound{4}});
  EXPECT_FALSE(s.contains(IntVector{5, 0}));
  EXPECT_TRUE(s.contains(IntVector{4, 0}));
}

TEST(Contains, DimensionMismatch) {
  EXPECT_THROW(diagonal_halfplane().contains(IntVector{1}), DimensionError);
}

TEST(Construction, EmptySetRejected) {
  // p_1 - p_0 <= -1 and p_0 - p_1 <= 0 together are infeasible.
  EXPECT_THROW(LNatSystem(2, {std::nullopt, std::nullopt}, {std::nullopt, std::nullopt}, {{0, 1, -1}, {1, 0, 0}}),
               EmptySetError);
  EXPECT_THROW(LNatSystem::box({Bound{2}}, {Bound{1}}), EmptySetError);
}

TEST(Construction, RepeatedPairKeepsTightest) {
  const LNatSystem s(2, {std::nullopt, std::nullopt}, {std::nullopt, std::nullopt}, {{0, 1, 3}, {0, 1, 1}});
  ASSERT_EQ(s.differences().size(), 1u);
  EXPECT_EQ(s.differences()[0].bound, 1);
}

TEST(Construction, JsonRoundTrip) {
  const LNatSystem s(3, {Bound{0}, std::nullopt, Bound{-2}}, {Bound{4}, Bound{7}, std::nullopt}, {{0, 2, 1}, {2, 1, 0}});
  const LNatSystem back = LNatSystem::from_json(s.to_json());
  EXPECT_EQ(back.alpha(), s.alpha());
  EXPECT_EQ(back.beta(), s.beta());
  EXPECT_EQ(back.differences(), s.differences());
  EXPECT_TRUE(s.to_json()["alpha"][1].is_null());
}

TEST(Construction, MalformedJsonIsParseError) {
  EXPECT_THROW(LNatSystem::from_json(nlohmann::json{{"alpha", {0, 0}}}), ParseError);
  EXPECT_THROW(LNatSystem::from_json(nlohmann::json{{"n", 2}, {"alpha", {0}}}), ParseError);
  EXPECT_THROW(LNatSystem::from_json(nlohmann::json{{"n", 2}, {"gamma", {{0, 1}}}}), ParseError);
}

TEST(MaxDifference, MatchesEnumeration) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const LNatSystem s = oracle::random_system(3, 3, rng);
    const auto pts = oracle::enumerate(s);
    for (std::size_t i = 0; i <= 3; ++i) {
      for (std::size_t j = 0; j <= 3; ++j) {
        if (i == j) continue;
        std::int64_t best = std::numeric_limits<std::int64_t>::min();
        for (const auto& p : pts) {
          const std::int64_t pj = j == 3 ? 0 : p[j];
          const std::int64_t pi = i == 3 ? 0 : p[i];
          best = std::max(best, pj - pi);
        }
        EXPECT_EQ(s.max_difference(i, j), best);
      }
    }
  }
}

TEST(ProjectBox, Clamp) {
  const std::vector<Bound> lo{Bound{0}, Bound{0}}, hi{Bound{4}, Bound{4}};
  const std::vector<double> p{5, -3};
  EXPECT_EQ(project_box(lo, hi, p), (std::vector<double>{4, 0}));
  const std::vector<double> inside{1.5, 3};
  EXPECT_EQ(project_box(lo, hi, inside), inside);
}

TEST(ProjectBox, OneSided) {
  const std::vector<Bound> lo{std::nullopt}, hi{Bound{2}};
  const std::vector<double> p{7};
  EXPECT_EQ(project_box(lo, hi, p), (std::vector<double>{2}));
}

TEST(ProjectGeneral, FeasiblePointIsFixed) {
  const LNatSystem s = diagonal_halfplane();
  const std::vector<double> p{3, 1.25};
  const Projection r = project_general(s, p);
  EXPECT_NEAR(r.distance.total, 0.0, 1e-12);
  EXPECT_NEAR(r.point[0], 3, 1e-12);
  EXPECT_NEAR(r.point[1], 1.25, 1e-12);
}

TEST(ProjectGeneral, HalfplaneExample) {
  const LNatSystem s = diagonal_halfplane();
  const std::vector<double> p{0, 3};
  const Projection r = project_general(s, p);
  EXPECT_NEAR(r.point[0], 1.5, 1e-12);
  EXPECT_NEAR(r.point[1], 1.5, 1e-12);
  EXPECT_NEAR(r.distance.total, 3.0, 1e-12);
  EXPECT_EQ(round_into(s, r.point), (IntVector{1, 1}));
  EXPECT_EQ(r.node_count, 5u);
}

TEST(ProjectGeneral, AgreesWithBoxClamp) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<std::int64_t> b(-5, 5);
  std::uniform_real_distribution<double> u(-9, 9);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 5;
    std::vector<Bound> lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::int64_t a = b(rng), c = b(rng);
      lo[i] = std::min(a, c);
      hi[i] = std::max(a, c);
    }
    std::vector<double> p(n);
    for (auto& x : p) x = u(rng);
    const LNatSystem s = LNatSystem::box(lo, hi);
    const auto clamp = project_box(lo, hi, p);
    const Projection r = project_general(s, p);
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = clamp[i] - p[i];
    // Both are projections; their distances must agree.
    EXPECT_NEAR(r.distance.total, oracle::pm_norm(d), 1e-9);
  }
}

TEST(ProjectGeneral, OptimalAgainstGridAndFeasible) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + trial % 2;
    const LNatSystem s = oracle::random_system(n, 3, rng);
    std::vector<double> p(n);
    for (auto& x : p) x = std::round(4 * u(rng)) / 4;
    const Projection r = project_general(s, p);
    EXPECT_TRUE(oracle::relaxed_member(s, r.point, 1e-9));
    EXPECT_TRUE(s.contains_relaxed(r.point));
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = r.point[i] - p[i];
    EXPECT_NEAR(r.distance.total, oracle::pm_norm(d), 1e-9);
    EXPECT_LE(r.distance.total, oracle::grid_min_distance(s, p, 0.25) + 1e-9);
    EXPECT_LE(r.arc_count, s.differences().size() + 4 * n + 2);
    EXPECT_EQ(r.node_count, n + 3);
  }
}

TEST(ProjectGeneral, UnboundedSystems) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 4;
    std::vector<DifferenceBound> g;
    for (std::size_t i = 0; i < n; ++i) g.push_back({i, (i + 1) % n, 1});
    const LNatSystem s(n, std::vector<Bound>(n), std::vector<Bound>(n), g);
    std::vector<double> p(n);
    for (auto& x : p) x = u(rng);
    const Projection r = project_general(s, p);
    EXPECT_TRUE(oracle::relaxed_member(s, r.point, 1e-9));
    const IntVector q = round_into(s, r.point);
    EXPECT_TRUE(s.contains(q));
  }
}

TEST(RoundInto, Examples) {
  const LNatSystem s = diagonal_halfplane();
  EXPECT_EQ(round_into(s, std::vector<double>{1.5, 1.5}), (IntVector{1, 1}));
  EXPECT_EQ(round_into(s, std::vector<double>{0.5, 0.5}), (IntVector{0, 0}));
  EXPECT_EQ(round_into(s, std::vector<double>{4, -2}), (IntVector{4, -2}));
}

TEST(RoundInto, OutsideHullIsInvariantViolation) {
  const LNatSystem s = diagonal_halfplane();
  EXPECT_THROW(round_into(s, std::vector<double>{0, 3}), InvariantViolation);
}

TEST(RoundInto, ConvexCombinationsRoundIntoSet) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0, 1);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const LNatSystem s = oracle::random_system(n, 3, rng, 0.3);
    const auto pts = oracle::enumerate(s);
    ASSERT_FALSE(pts.empty());
    const std::size_t k = 1 + trial % 4;
    std::vector<double> lambda(k);
    double total = 0;
    for (auto& l : lambda) total += (l = u(rng) + 1e-3);
    std::vector<double> q(n, 0.0);
    for (std::size_t a = 0; a < k; ++a) {
      const auto& p = pts[std::uniform_int_distribution<std::size_t>(0, pts.size() - 1)(rng)];
      for (std::size_t i = 0; i < n; ++i) q[i] += lambda[a] / total * static_cast<double>(p[i]);
    }
    const IntVector r = round_ties_down(snap_half_integers(q));
    EXPECT_TRUE(s.contains(r));
    ++checked;
  }
  EXPECT_EQ(checked, 1000);
}
