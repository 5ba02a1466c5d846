#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dcaw/descent.hpp"
#include "dcaw/int_vector.hpp"
#include "dcaw/lnat_system.hpp"
#include "json.hpp"

namespace dcaw {

struct Edge {
  std::size_t left = 0;
  std::size_t right = 0;
  std::int64_t weight = 0;
};

// Bipartite graph with |L| = |R| = n/2 that has at least one perfect
// matching (checked on construction). Dual variables are laid out as
// (s_0..s_{h-1}, t_0..t_{h-1}) with h = n/2.
class MatchingInstance {
 public:
  MatchingInstance(std::size_t left_count, std::size_t right_count, std::vector<Edge> edges);

  std::size_t half() const noexcept { return half_; }
  std::size_t vertex_count() const noexcept { return 2 * half_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::int64_t max_abs_weight() const noexcept;

  // Feasible region of the dual: t_j - s_i <= -w_ij.
  LNatSystem dual_domain() const;

  nlohmann::json to_json() const;
  static MatchingInstance from_json(const nlohmann::json& j);

 private:
  std::size_t half_;
  std::vector<Edge> edges_;  // sorted by (left, right)
};

struct DualPair {
  IntVector s;
  IntVector t;

  IntVector joined() const;
  static DualPair split(const IntVector& p, std::size_t half);

  friend bool operator==(const DualPair&, const DualPair&) = default;
};

struct RealDualPair {
  std::vector<double> s;
  std::vector<double> t;

  std::vector<double> joined() const;
  nlohmann::json to_json() const;
  static RealDualPair from_json(const nlohmann::json& j);
};

struct DualValue {
  std::int64_t objective = 0;  // Σs - Σt
  bool feasible = false;       // s_i - t_j >= w_ij on every edge
};

DualValue dual_objective(const MatchingInstance& inst, const DualPair& p);

// The dual as an L-convex objective: Σs - Σt on the feasible region, +inf
// elsewhere.
Objective matching_dual_objective(const MatchingInstance& inst);

struct DualProjection {
  double epsilon = 0.0;  // max_e (w_ij - s_i + t_j)
  RealDualPair projected;
  DualPair rounded;
};

// ℓ∞±-projection onto the dual's convex hull by the ±ε/2 shift, then
// ties-down rounding. O(m + n).
DualProjection project_dual(const MatchingInstance& inst, const RealDualPair& p_hat);

// Indices into inst.edges() of the edges with s_i - t_j = w_ij.
std::vector<std::size_t> tight_edges(const MatchingInstance& inst, const DualPair& p);

struct CoverResult {
  std::vector<std::optional<std::size_t>> mate_of_left;
  std::vector<bool> cover_left;   // S
  std::vector<bool> cover_right;  // T
  std::size_t matching_size = 0;

  std::size_t cover_size() const;
};

// Hopcroft–Karp maximum matching on a bipartite graph given as (left,
// right) pairs, with a minimum vertex cover read off the alternating
// reachability set Z of the unmatched left vertices: S = L \ Z, T = R ∩ Z.
CoverResult max_matching_min_cover(std::size_t left_count, std::size_t right_count,
                                   const std::vector<std::pair<std::size_t, std::size_t>>& edges);

// min { s_i - t_j - w_ij : i ∉ S, j ∉ T }.
std::int64_t matching_step_length(const MatchingInstance& inst, const DualPair& p,
                                  const CoverResult& cover);

struct MatchingOptions {
  StepKind step = StepKind::Long;
  DescentOptions descent;
};

struct MatchingSolution {
  std::vector<std::pair<std::size_t, std::size_t>> matching;  // (left, right)
  std::int64_t weight = 0;
  DualPair dual;
  DualPair start;  // rounded projection of the prediction
  DescentTrace trace;
  bool certified = false;  // weight == Σs - Σt with a feasible dual
};

// An empty p_hat is the zero prediction.
MatchingSolution solve_matching(const MatchingInstance& inst, const RealDualPair& p_hat,
                                const MatchingOptions& options = {});

struct BruteForceMatching {
  std::int64_t weight = 0;
  // Each optimum as right-partner per left vertex.
  std::vector<std::vector<std::size_t>> optimal;
};

inline constexpr std::size_t kMaxBruteForceHalf = 8;

BruteForceMatching brute_force_matching(const MatchingInstance& inst);

// Optimal dual face: feasibility plus tightness on the edges of an optimal
// matching (complementary slackness).
LNatSystem optimal_dual_face(const MatchingInstance& inst,
                             const std::vector<std::pair<std::size_t, std::size_t>>& matching);

// Conversion to the minimum-cost form with duals y and y_i + y_j <= c_ij
// where c = -w: y_L = -s, y_R = t.
struct MinCostDual {
  std::vector<std::int64_t> left;
  std::vector<std::int64_t> right;
};
MinCostDual to_min_cost_dual(const DualPair& p);
DualPair from_min_cost_dual(const MinCostDual& y);

// Path graph P_n (n even) as a max-weight instance: edge {i, i+1} (1-based)
// costs C for odd i and 0 for even i, so weights are -C and 0. Vertex
// 2k-1 is left index k-1 and vertex 2k is right index k-1.
MatchingInstance path_counterexample_instance(std::size_t n, std::int64_t cost);

}  // namespace dcaw
