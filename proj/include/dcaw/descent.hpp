#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dcaw/extended.hpp"
#include "dcaw/int_vector.hpp"
#include "dcaw/lnat_system.hpp"

namespace dcaw {

enum class ConvexityClass { L, LNatural };

// Plus: N+ = {0,+1}^V. PlusMinus: N± = {0,-1}^V ∪ {0,+1}^V.
enum class NeighborhoodMode { Plus, PlusMinus };

constexpr NeighborhoodMode neighborhood_for(ConvexityClass c) {
  return c == ConvexityClass::LNatural ? NeighborhoodMode::PlusMinus
                                       : NeighborhoodMode::Plus;
}

// g : Z^V -> Z ∪ {+∞}. Evaluation must be deterministic and pure.
struct Objective {
  std::size_t dimension = 0;
  ConvexityClass convexity = ConvexityClass::LNatural;
  std::function<Extended(const IntVector&)> eval;

  Extended operator()(const IntVector& p) const { return eval(p); }
};

// Result of one local search: the chosen direction and g(p + d).
struct LocalStep {
  Direction direction;
  Extended value;
};

// Solves min { g(p + d) : d in the neighborhood } exactly. The current
// value g(p) is passed in so oracles need not re-evaluate it.
using LocalOracle = std::function<LocalStep(const IntVector& p, Extended current)>;

using StepLengthFn =
    std::function<std::int64_t(const IntVector& p, const Direction& d)>;

// Step rule exposed by the concrete solvers.
enum class StepKind { Unit, Long };

class StepRule {
 public:
  enum class Kind { Unit, Long, Custom };

  static StepRule unit() { return StepRule(Kind::Unit, {}, 0); }
  // Long step along the discrete slope; cap bounds the doubling search.
  static StepRule long_step(std::int64_t cap = kMagnitudeCap) {
    return StepRule(Kind::Long, {}, cap);
  }
  static StepRule custom(StepLengthFn fn) {
    return StepRule(Kind::Custom, std::move(fn), 0);
  }

  Kind kind() const noexcept { return kind_; }
  std::int64_t cap() const noexcept { return cap_; }
  const StepLengthFn& fn() const noexcept { return fn_; }

 private:
  StepRule(Kind k, StepLengthFn fn, std::int64_t cap)
      : kind_(k), fn_(std::move(fn)), cap_(cap) {}
  Kind kind_;
  StepLengthFn fn_;
  std::int64_t cap_;
};

struct IterationRecord {
  std::vector<std::size_t> support;
  int sign = +1;
  std::int64_t step = 0;  // 0 on the final (non-improving) record
  Extended objective;     // value after the step
};

struct DescentTrace {
  std::size_t iterations = 0;  // local-oracle invocations
  std::vector<IterationRecord> records;
  std::uint64_t local_oracle_calls = 0;
  std::uint64_t oracle_calls = 0;  // solver-specific (e.g. independence tests)
  std::chrono::microseconds wall_time{0};
};

struct DescentOptions {
  // 0 selects 10 · n · value_range.
  std::size_t max_iterations = 0;
  std::int64_t value_range = std::int64_t{1} << 20;
};

struct DescentResult {
  IntVector point;
  Extended value;
  DescentTrace trace;
};

// Steepest descent from p0. Returns a point with no improving direction in
// the oracle's neighborhood, which is a global minimizer for L/L♮-convex g.
DescentResult steepest_descent(const Objective& g, const LocalOracle& local,
                               const StepRule& step, const IntVector& p0,
                               const DescentOptions& options = {});

// sup { λ > 0 : g(p + λd) - g(p) = λ (g(p + d) - g(p)) } by doubling then
// bisection. Throws UnboundedDirectionError if the slope is still linear at
// cap.
std::int64_t long_step_length(const Objective& g, const IntVector& p,
                              const Direction& d,
                              std::int64_t cap = kMagnitudeCap);

inline constexpr std::size_t kMaxBruteForceDimension = 22;

// Exhaustive local search. Ties: lexicographically smallest support (as a
// sorted index sequence), then + before -. Returns the zero direction when
// nothing improves strictly.
LocalStep brute_force_local_oracle(const Objective& g, const IntVector& p,
                                   NeighborhoodMode mode);

LocalOracle make_brute_force_oracle(const Objective& g);

inline constexpr std::uint64_t kMaxEnumeratedPoints = 10'000'000;

struct Minimizer {
  IntVector point;
  Extended value;
};

// Lexicographically smallest minimizer of g over a bounded domain.
Minimizer lexicographic_minimizer(const Objective& g, const LNatSystem& domain);

// Every minimizer of g over a bounded domain, in lexicographic order.
std::vector<IntVector> all_minimizers(const Objective& g, const LNatSystem& domain);

}  // namespace dcaw
