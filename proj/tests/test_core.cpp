#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <vector>

#include "dcaw/descent.hpp"
#include "dcaw/errors.hpp"
#include "dcaw/extended.hpp"
#include "dcaw/int_vector.hpp"
#include "dcaw/lnat_system.hpp"
#include "dcaw/norms.hpp"
#include "oracles.hpp"

using namespace dcaw;

namespace {

Objective l1_objective(std::size_t n) {
  return {n, ConvexityClass::LNatural, [](const IntVector& p) {
            std::int64_t s = 0;
            for (auto x : p) s += std::llabs(x);
            return Extended(s);
          }};
}

// Separable convex objective restricted to a box: L♮-convex.
Objective boxed_separable(const std::vector<std::int64_t>& centers, std::int64_t lo, std::int64_t hi) {
  return {centers.size(), ConvexityClass::LNatural, [centers, lo, hi](const IntVector& p) {
            std::int64_t s = 0;
            for (std::size_t i = 0; i < p.size(); ++i) {
              if (p[i] < lo || p[i] > hi) return Extended::infinity();
              const std::int64_t d = p[i] - centers[i];
              s += d * d;
            }
            return Extended(s);
          }};
}

// Σ a_i |p_i - c_i| + Σ b |p_j - p_i - e| on a box: L♮-convex.
Objective random_lnat_objective(std::size_t n, std::mt19937_64& rng, LNatSystem& domain) {
  std::uniform_int_distribution<std::int64_t> c(-3, 3);
  std::uniform_int_distribution<std::int64_t> a(1, 3);
  std::vector<std::int64_t> centers(n), scale(n);
  for (std::size_t i = 0; i < n; ++i) {
    centers[i] = c(rng);
    scale[i] = a(rng);
  }
  struct Pair {
    std::size_t i, j;
    std::int64_t offset, weight;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i + 1 < n; ++i) pairs.push_back({i, i + 1, c(rng), a(rng)});
  std::vector<Bound> lo(n, Bound{-4}), hi(n, Bound{4});
  domain = LNatSystem::box(lo, hi);
  return {n, ConvexityClass::LNatural, [=](const IntVector& p) {
            std::int64_t s = 0;
            for (std::size_t i = 0; i < n; ++i) {
              if (p[i] < -4 || p[i] > 4) return Extended::infinity();
              s += scale[i] * std::llabs(p[i] - centers[i]);
            }
            for (const auto& q : pairs) s += q.weight * std::llabs(p[q.j] - p[q.i] - q.offset);
            return Extended(s);
          }};
}

}  // namespace

TEST(PmNorm, ZeroVector) {
  const std::vector<double> p{0, 0, 0};
  const PmNorm r = linf_pm_norm(p);
  EXPECT_EQ(r.plus, 0);
  EXPECT_EQ(r.minus, 0);
  EXPECT_EQ(r.total, 0);
}

TEST(PmNorm, MixedSigns) {
  const std::vector<double> p{3, -1};
  const PmNorm r = linf_pm_norm(p);
  EXPECT_EQ(r.plus, 3);
  EXPECT_EQ(r.minus, 1);
  EXPECT_EQ(r.total, 4);
}

TEST(PmNorm, NonNegative) {
  const std::vector<double> p{2, 1};
  const PmNorm r = linf_pm_norm(p);
  EXPECT_EQ(r.plus, 2);
  EXPECT_EQ(r.minus, 0);
  EXPECT_EQ(r.total, 2);
}

TEST(PmNorm, SandwichedByLinfAndTriangleInequality) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + trial % 6;
    std::vector<double> a(n), b(n), c(n), ab(n), bc(n), ac(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = u(rng);
      b[i] = u(rng);
      c[i] = u(rng);
      ab[i] = a[i] - b[i];
      bc[i] = b[i] - c[i];
      ac[i] = a[i] - c[i];
    }
    const double inf = linf_norm(a);
    const double pm = linf_pm_norm(a).total;
    EXPECT_LE(inf, pm + 1e-12);
    EXPECT_LE(pm, 2 * inf + 1e-12);
    EXPECT_LE(linf_pm_norm(ac).total, linf_pm_norm(ab).total + linf_pm_norm(bc).total + 1e-9);
    EXPECT_NEAR(pm, oracle::pm_norm(a), 1e-12);
  }
}

TEST(Rounding, HalvesGoDown) {
  EXPECT_EQ(round_ties_down(0.5), 0);
  EXPECT_EQ(round_ties_down(1.49), 1);
  EXPECT_EQ(round_ties_down(-0.5), -1);
  EXPECT_EQ(round_ties_down(2.5), 2);
  EXPECT_EQ(round_ties_down(-2.51), -3);
  EXPECT_EQ(round_ties_down(1.51), 2);
}

TEST(Rounding, IdempotentOnIntegers) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::int64_t> u(-1000, 1000);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> q(5);
    for (auto& x : q) x = static_cast<double>(u(rng));
    const IntVector once = round_ties_down(q);
    const IntVector twice = round_ties_down(once.as_reals());
    EXPECT_EQ(once, twice);
    for (std::size_t i = 0; i < q.size(); ++i) EXPECT_EQ(once[i], static_cast<std::int64_t>(q[i]));
  }
}

TEST(Rounding, OverflowRaises) {
  const std::vector<double> q{std::ldexp(1.0, 50)};
  EXPECT_THROW(round_ties_down(q), OverflowError);
}

TEST(Rounding, SnapMovesNearHalves) {
  const std::vector<double> q{0.5 + 1e-12, 1.5 - 1e-12, 0.3};
  const auto s = snap_half_integers(q);
  EXPECT_EQ(s[0], 0.5);
  EXPECT_EQ(s[1], 1.5);
  EXPECT_EQ(s[2], 0.3);
}

TEST(Extended, SaturatesAndOrders) {
  const Extended a(3);
  const Extended inf = Extended::infinity();
  EXPECT_TRUE((a + inf).is_infinite());
  EXPECT_LT(a, inf);
  EXPECT_EQ(a + Extended(4), Extended(7));
  EXPECT_THROW(inf.value(), ContractError);
  EXPECT_THROW(Extended(std::numeric_limits<std::int64_t>::max()) + Extended(1), OverflowError);
}

TEST(IntVectorTest, MagnitudeCapEnforced) {
  EXPECT_THROW(IntVector({kMagnitudeCap + 1}), OverflowError);
  IntVector v(2);
  EXPECT_THROW(v.set(0, -kMagnitudeCap - 1), OverflowError);
}

TEST(Descent, OptimalStartTakesOneIteration) {
  const Objective g = l1_objective(2);
  const auto r = steepest_descent(g, make_brute_force_oracle(g), StepRule::long_step(), IntVector{0, 0});
  EXPECT_EQ(r.point, (IntVector{0, 0}));
  EXPECT_EQ(r.trace.iterations, 1u);
  ASSERT_EQ(r.trace.records.size(), 1u);
  EXPECT_EQ(r.trace.records.back().step, 0);
}

TEST(Descent, AbsoluteValueFromThreeZero) {
  const Objective g = l1_objective(2);
  for (auto rule : {StepRule::long_step(), StepRule::unit()}) {
    const auto r = steepest_descent(g, make_brute_force_oracle(g), rule, IntVector{3, 0});
    EXPECT_EQ(r.point, (IntVector{0, 0}));
    EXPECT_EQ(r.value, Extended(0));
    EXPECT_LE(r.trace.iterations, 4u);
  }
}

TEST(Descent, InfeasibleStartRaises) {
  const Objective g = boxed_separable({0, 0}, -1, 1);
  EXPECT_THROW(steepest_descent(g, make_brute_force_oracle(g), StepRule::unit(), IntVector{5, 0}),
               InfeasibleStartError);
}

TEST(Descent, BrokenOracleHitsDivergenceCap) {
  const Objective g = l1_objective(1);
  // Claims an improving move that does not exist, forever.
  LocalOracle liar = [&](const IntVector& p, Extended current) {
    return LocalStep{Direction{{0}, p[0] > 0 ? -1 : +1}, Extended(current.value() - 1)};
  };
  DescentOptions opts;
  opts.max_iterations = 50;
  EXPECT_ANY_THROW(steepest_descent(g, liar, StepRule::unit(), IntVector{0}, opts));
}

TEST(Descent, LConvexMatchesEnumeration) {
  // g(p) = Σ |p_i - p_j - c_ij| + (linear along 1 is zero), restricted to a
  // bounded L-convex domain given by difference constraints and a box.
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3;
    std::uniform_int_distribution<std::int64_t> c(-2, 2);
    const std::vector<std::int64_t> off{c(rng), c(rng), c(rng)};
    LNatSystem domain = LNatSystem::box({Bound{-3}, Bound{-3}, Bound{-3}}, {Bound{3}, Bound{3}, Bound{3}});
    Objective g{n, ConvexityClass::LNatural, [off](const IntVector& p) {
                  for (auto x : p) {
                    if (x < -3 || x > 3) return Extended::infinity();
                  }
                  return Extended(std::llabs(p[1] - p[0] - off[0]) + std::llabs(p[2] - p[1] - off[1]) +
                                  std::llabs(p[2] - p[0] - off[2]) + std::llabs(p[0] - off[0]));
                }};
    const Minimizer best = lexicographic_minimizer(g, domain);
    const auto r = steepest_descent(g, make_brute_force_oracle(g), StepRule::long_step(16), IntVector{3, -3, 0});
    EXPECT_EQ(r.value, best.value);
  }
}

TEST(Descent, UnitAndLongAgreeAndBoundHolds) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + trial % 3;
    LNatSystem domain = LNatSystem::unconstrained(n);
    const Objective g = random_lnat_objective(n, rng, domain);
    std::uniform_int_distribution<std::int64_t> s(-4, 4);
    std::vector<std::int64_t> start(n);
    for (auto& x : start) x = s(rng);
    const IntVector p0(start);
    const auto minima = all_minimizers(g, domain);
    const auto unit = steepest_descent(g, make_brute_force_oracle(g), StepRule::unit(), p0);
    const auto lng = steepest_descent(g, make_brute_force_oracle(g), StepRule::long_step(16), p0);
    EXPECT_EQ(unit.value, lng.value);
    EXPECT_EQ(unit.value, g(minima.front()));
    std::int64_t dist = std::numeric_limits<std::int64_t>::max();
    for (const auto& m : minima) dist = std::min(dist, oracle::pm_distance(m, p0));
    EXPECT_LE(static_cast<std::int64_t>(unit.trace.iterations), dist + 1);
    EXPECT_LE(static_cast<std::int64_t>(lng.trace.iterations), dist + 1);
    // Objective strictly decreases until the final non-improving record.
    for (const auto* r : {&unit, &lng}) {
      Extended prev = g(p0);
      for (std::size_t k = 0; k + 1 < r->trace.records.size(); ++k) {
        EXPECT_LT(r->trace.records[k].objective, prev);
        prev = r->trace.records[k].objective;
      }
      EXPECT_EQ(r->trace.records.back().step, 0);
      EXPECT_EQ(r->trace.records.back().objective, r->value);
    }
  }
}

TEST(LongStep, AbsoluteValueRunsToZero) {
  const Objective g = l1_objective(1);
  EXPECT_EQ(long_step_length(g, IntVector{5}, Direction{{0}, -1}), 5);
}

TEST(LongStep, StrictlyConvexIsOne) {
  const Objective g = boxed_separable({0}, -100, 100);
  EXPECT_EQ(long_step_length(g, IntVector{5}, Direction{{0}, -1}), 1);
}

TEST(LongStep, LinearBeyondCapRaises) {
  const Objective g{1, ConvexityClass::LNatural, [](const IntVector& p) { return Extended(-p[0]); }};
  EXPECT_THROW(long_step_length(g, IntVector{0}, Direction{{0}, +1}, 1000), UnboundedDirectionError);
}

TEST(BruteForceOracle, OptimalPointGivesZero) {
  const Objective g = l1_objective(3);
  const LocalStep s = brute_force_local_oracle(g, IntVector{0, 0, 0}, NeighborhoodMode::PlusMinus);
  EXPECT_TRUE(s.direction.is_zero());
}

TEST(BruteForceOracle, PlusNeighborhoodOnSquare) {
  const Objective g{2, ConvexityClass::L, [](const IntVector& p) {
                      if (p[0] < 0 || p[0] > 1 || p[1] < 0 || p[1] > 1) return Extended::infinity();
                      return Extended(-(p[0] + p[1]));
                    }};
  const LocalStep s = brute_force_local_oracle(g, IntVector{0, 0}, NeighborhoodMode::Plus);
  EXPECT_EQ(s.direction.support, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(s.direction.sign, +1);
}

TEST(BruteForceOracle, TiesPickLexicographicSupport) {
  // Moving either coordinate alone gains 1; moving both gains nothing.
  const Objective g{2, ConvexityClass::LNatural, [](const IntVector& p) {
                      if (p[0] < 0 || p[1] < 0 || p[0] + p[1] > 1) return Extended::infinity();
                      return Extended(-(p[0] + p[1]));
                    }};
  const LocalStep s = brute_force_local_oracle(g, IntVector{0, 0}, NeighborhoodMode::PlusMinus);
  EXPECT_EQ(s.direction.support, (std::vector<std::size_t>{0}));
  EXPECT_EQ(s.direction.sign, +1);
}

TEST(BruteForceOracle, PlusBeforeMinusOnTies) {
  const Objective g{1, ConvexityClass::LNatural, [](const IntVector& p) { return Extended(p[0] == 0 ? 1 : 0); }};
  const LocalStep s = brute_force_local_oracle(g, IntVector{0}, NeighborhoodMode::PlusMinus);
  EXPECT_EQ(s.direction.sign, +1);
}

TEST(BruteForceOracle, DimensionCap) {
  const Objective g = l1_objective(kMaxBruteForceDimension + 1);
  EXPECT_THROW(brute_force_local_oracle(g, IntVector(kMaxBruteForceDimension + 1), NeighborhoodMode::Plus),
               CapacityError);
}

TEST(LexMinimizer, ConstantPicksSmallest) {
  const Objective g{2, ConvexityClass::LNatural, [](const IntVector&) { return Extended(0); }};
  const LNatSystem d = LNatSystem::box({Bound{0}, Bound{0}}, {Bound{0}, Bound{1}});
  EXPECT_EQ(lexicographic_minimizer(g, d).point, (IntVector{0, 0}));
  EXPECT_EQ(all_minimizers(g, d).size(), 2u);
}

TEST(LexMinimizer, UniqueMinimizer) {
  const Objective g{1, ConvexityClass::LNatural, [](const IntVector& p) { return Extended(std::llabs(p[0] - 1)); }};
  const LNatSystem d = LNatSystem::box({Bound{0}}, {Bound{3}});
  EXPECT_EQ(lexicographic_minimizer(g, d).point, (IntVector{1}));
}

TEST(LexMinimizer, UnboundedDomainRejected) {
  const Objective g = l1_objective(1);
  EXPECT_ANY_THROW(lexicographic_minimizer(g, LNatSystem::unconstrained(1)));
}
