#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "dcaw/descent.hpp"
#include "dcaw/int_vector.hpp"
#include "dcaw/lnat_system.hpp"
#include "json.hpp"

namespace dcaw {

using ElementSet = std::vector<std::size_t>;

// Independence oracle on the ground set {0, ..., n-1}. Every counted test
// bumps the call counter by exactly one; the counter is the only mutable
// state, so one oracle object belongs to one solve at a time.
class MatroidOracle {
 public:
  explicit MatroidOracle(std::size_t n) : n_(n) {}
  virtual ~MatroidOracle() = default;

  std::size_t ground_size() const noexcept { return n_; }

  bool is_independent(const ElementSet& x) const {
    ++calls_;
    return test(x);
  }
  // Same answer without touching the counter; for verification only.
  bool is_independent_uncounted(const ElementSet& x) const { return test(x); }

  std::uint64_t calls() const noexcept { return calls_; }
  void reset_calls() const noexcept { calls_ = 0; }

  // Rank of the ground set, computed once by an uncounted greedy scan.
  std::size_t rank() const;
  // Rank of a subset by an uncounted greedy scan.
  std::size_t rank_of(const ElementSet& x) const;

  virtual nlohmann::json to_json() const = 0;

 protected:
  virtual bool test(const ElementSet& x) const = 0;

 private:
  std::size_t n_;
  mutable std::uint64_t calls_ = 0;
  mutable std::optional<std::size_t> rank_;
};

class UniformMatroid final : public MatroidOracle {
 public:
  UniformMatroid(std::size_t n, std::size_t k);
  nlohmann::json to_json() const override;

 protected:
  bool test(const ElementSet& x) const override;

 private:
  std::size_t k_;
};

// X is independent iff |X ∩ block_b| <= caps_b for every block.
class PartitionMatroid final : public MatroidOracle {
 public:
  PartitionMatroid(std::size_t n, std::vector<ElementSet> blocks, std::vector<std::size_t> caps);
  const std::vector<ElementSet>& blocks() const noexcept { return blocks_; }
  const std::vector<std::size_t>& caps() const noexcept { return caps_; }
  nlohmann::json to_json() const override;

 protected:
  bool test(const ElementSet& x) const override;

 private:
  std::vector<ElementSet> blocks_;
  std::vector<std::size_t> caps_;
  std::vector<std::size_t> block_of_;
};

// Independent sets are the subsets of the listed bases. Test oracle only;
// the list is trusted to satisfy the basis exchange axiom.
class ExplicitBasesMatroid final : public MatroidOracle {
 public:
  ExplicitBasesMatroid(std::size_t n, std::vector<ElementSet> bases);
  nlohmann::json to_json() const override;

 protected:
  bool test(const ElementSet& x) const override;

 private:
  std::vector<std::vector<bool>> bases_;
};

std::unique_ptr<MatroidOracle> matroid_from_json(std::size_t n, const nlohmann::json& j);

// Scans elements by non-increasing v, ties by ascending index; n counted
// calls. Returns a sorted base maximizing v(B).
ElementSet greedy_max_weight_base(const MatroidOracle& m, std::span<const std::int64_t> v);

// A matroid queried through exchanges around an independent set.
class IndependenceView {
 public:
  virtual ~IndependenceView() = default;
  virtual std::size_t ground_size() const = 0;
  // Is I - removed + added independent? I must be independent.
  virtual bool exchange(const ElementSet& i, std::optional<std::size_t> removed,
                        std::size_t added) const = 0;
  // Uncounted full test and rank, for certificates.
  virtual bool independent_uncounted(const ElementSet& x) const = 0;
  // Counter of the underlying oracle.
  virtual std::uint64_t calls() const = 0;
  std::size_t rank_uncounted(const ElementSet& x) const;
};

class PlainView final : public IndependenceView {
 public:
  explicit PlainView(const MatroidOracle& m) : m_(m) {}
  std::size_t ground_size() const override { return m_.ground_size(); }
  bool exchange(const ElementSet& i, std::optional<std::size_t> removed,
                std::size_t added) const override;
  bool independent_uncounted(const ElementSet& x) const override {
    return m_.is_independent_uncounted(x);
  }
  std::uint64_t calls() const override { return m_.calls(); }

 private:
  const MatroidOracle& m_;
};

// M^v: the matroid whose bases are the v-maximum bases of M. It splits into
// one summand per weight level t, and X ⊆ V(t) is independent in the level-t
// summand iff X ∪ (B_ref ∩ V_{>t}) is independent in M, where B_ref is any
// v-maximum base.
class MvOracle final : public IndependenceView {
 public:
  MvOracle(const MatroidOracle& m, std::vector<std::int64_t> v, ElementSet b_ref);

  std::size_t ground_size() const override { return m_.ground_size(); }
  // One counted call on the underlying oracle.
  bool exchange(const ElementSet& i, std::optional<std::size_t> removed,
                std::size_t added) const override;
  bool mv_query(const ElementSet& i, std::optional<std::size_t> removed, std::size_t added) const {
    return exchange(i, removed, added);
  }
  bool independent_uncounted(const ElementSet& x) const override;
  std::uint64_t calls() const override { return m_.calls(); }
  // Zero-call necessary condition: |I ∩ V(t)| <= |B_ref ∩ V(t)| on each level.
  bool level_counts_fit(const ElementSet& i) const;

  const ElementSet& reference_base() const noexcept { return b_ref_; }

 private:
  ElementSet level_query(const ElementSet& x, std::int64_t level) const;

  const MatroidOracle& m_;
  std::vector<std::int64_t> v_;
  ElementSet b_ref_;
};

struct IntersectionResult {
  ElementSet independent;  // maximum common independent set
  ElementSet x_min;        // minimizer of ρ1(X) + ρ2(V \ X)
  std::uint64_t calls = 0;
};

// Shortest augmenting paths in the exchange graph: arcs y -> z when
// I - y + z ∈ I1 and z -> y when I - y + z ∈ I2 (y ∈ I, z ∉ I), from
// X1 = {z : I + z ∈ I1} to X2 = {z : I + z ∈ I2}. At termination X_min is
// the set of vertices that can reach X2. With verify, Edmonds' equality is
// checked with uncounted rank evaluations.
IntersectionResult cardinality_intersection(const IndependenceView& m1,
                                            const IndependenceView& m2, bool verify = true);

// Two matroids of equal rank on one ground set with integer weights.
class WeightedMIInstance {
 public:
  WeightedMIInstance(std::shared_ptr<const MatroidOracle> m1,
                     std::shared_ptr<const MatroidOracle> m2, std::vector<std::int64_t> w);

  std::size_t ground_size() const noexcept { return w_.size(); }
  std::size_t rank() const noexcept { return rank_; }
  const MatroidOracle& m1() const noexcept { return *m1_; }
  const MatroidOracle& m2() const noexcept { return *m2_; }
  const std::vector<std::int64_t>& weights() const noexcept { return w_; }
  std::int64_t max_abs_weight() const noexcept;
  std::uint64_t total_calls() const noexcept { return m1_->calls() + m2_->calls(); }

  nlohmann::json to_json() const;
  static WeightedMIInstance from_json(const nlohmann::json& j);

 private:
  std::shared_ptr<const MatroidOracle> m1_;
  std::shared_ptr<const MatroidOracle> m2_;
  std::vector<std::int64_t> w_;
  std::size_t rank_ = 0;
};

// max_{B ∈ B1} p(B) + max_{B ∈ B2} (w - p)(B) by two greedy scans.
std::int64_t dual_value(const WeightedMIInstance& inst, const IntVector& p);

Objective matroid_dual_objective(const WeightedMIInstance& inst);

struct MatroidDirection {
  Direction direction;        // 1_X, empty when p is optimal
  std::int64_t improvement = 0;  // g(p + 1_X) - g(p) = |I| - r
  ElementSet independent;        // the certificate I
};

MatroidDirection matroid_local_direction(const WeightedMIInstance& inst, const IntVector& p);

// Long step along 1_X, capped by max(4 r W + 1, g(p) + r W); the second
// term bounds any step since g decreases by at least 1 per unit and
// g >= -rW.
std::int64_t matroid_step_length(const WeightedMIInstance& inst, const IntVector& p,
                                 const Direction& x);

struct MatroidOptions {
  StepKind step = StepKind::Long;
  DescentOptions descent;
};

struct MatroidSolution {
  ElementSet base;
  std::int64_t weight = 0;
  IntVector dual;
  IntVector start;
  DescentTrace trace;
  bool certified = false;  // w(B*) == g(p*)
};

MatroidSolution solve_matroid_intersection(const WeightedMIInstance& inst,
                                           std::span<const double> p_hat,
                                           const MatroidOptions& options = {});

// (max_i p_i - min_i p_i) / 2: the smallest ℓ∞ norm over p + c·1.
double normalized_dual_norm(const WeightedMIInstance& inst, const IntVector& p);

// Optimal duals for a maximum-weight common base B: p_j - p_i <= 0 when
// B - i + j ∈ B1 and p_i - p_j <= w_i - w_j when B - i + j ∈ B2. Uses
// uncounted tests.
LNatSystem matroid_optimal_face(const WeightedMIInstance& inst, const ElementSet& base);

struct BruteForceIntersection {
  std::int64_t weight = 0;
  std::vector<ElementSet> optimal;
};

inline constexpr std::size_t kMaxBruteForceGround = 20;

BruteForceIntersection brute_force_intersection(const WeightedMIInstance& inst);

// Odd n: M1 has blocks {0}(cap 0), {1,2}, {3,4}, ...; M2 has blocks
// {0,1}, {2,3}, ..., {n-1}(cap 0); w_i = +W for even i and -W for odd i
// (0-based). The unique common base is {1, 3, ..., n-2}.
WeightedMIInstance tight_partition_instance(std::size_t n, std::int64_t w);

// An optimal dual of norm exactly rW for the tight family.
IntVector tight_partition_witness(std::size_t n, std::int64_t w);

}  // namespace dcaw
