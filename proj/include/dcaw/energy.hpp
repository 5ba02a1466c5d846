#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dcaw/descent.hpp"
#include "dcaw/extended.hpp"
#include "dcaw/int_vector.hpp"
#include "dcaw/lnat_system.hpp"
#include "json.hpp"

namespace dcaw {

// φ over the labels lo, lo + 1, ..., lo + values.size() - 1.
struct UnaryTable {
  std::int64_t lo = 0;
  std::vector<std::int64_t> values;

  std::int64_t hi() const { return lo + static_cast<std::int64_t>(values.size()) - 1; }
};

enum class PairwiseKind { Table, Abs, Quad };

// ψ(p_j - p_i) over the deviation window [lo, lo + values.size() - 1];
// +inf outside. Named kinds are materialized into the table on load.
struct PairwiseTerm {
  std::size_t i = 0;
  std::size_t j = 0;
  std::int64_t lo = 0;
  std::vector<std::int64_t> values;
  PairwiseKind kind = PairwiseKind::Table;
  std::int64_t weight = 1;

  std::int64_t hi() const { return lo + static_cast<std::int64_t>(values.size()) - 1; }
  Extended at(std::int64_t delta) const;
};

// Unary tables and pairwise terms must be discretely convex; the induced
// feasible region must be non-empty.
class EnergyInstance {
 public:
  EnergyInstance(std::vector<UnaryTable> unary, std::vector<PairwiseTerm> pairwise);

  // ψ(δ) = weight·|δ| or weight·δ² on [lo, hi]; window defaults to every
  // deviation the boxes allow.
  static PairwiseTerm named_term(const std::vector<UnaryTable>& unary, std::size_t i,
                                 std::size_t j, PairwiseKind kind, std::int64_t weight,
                                 std::optional<std::pair<std::int64_t, std::int64_t>> window = {});

  std::size_t size() const noexcept { return unary_.size(); }
  std::size_t edge_count() const noexcept { return pairwise_.size(); }
  const std::vector<UnaryTable>& unary() const noexcept { return unary_; }
  const std::vector<PairwiseTerm>& pairwise() const noexcept { return pairwise_; }
  const LNatSystem& domain() const noexcept { return domain_; }
  // True when every window is implied by the boxes, so projection is a clamp.
  bool box_only() const noexcept { return box_only_; }
  std::int64_t max_label_width() const noexcept;

  nlohmann::json to_json() const;
  static EnergyInstance from_json(const nlohmann::json& j);

 private:
  std::vector<UnaryTable> unary_;
  std::vector<PairwiseTerm> pairwise_;
  bool box_only_ = true;  // declared before domain_, which sets it
  LNatSystem domain_;
};

// Σ φ_i(p_i) + Σ ψ_ij(p_j - p_i), +inf outside the domain.
Extended energy_value(const EnergyInstance& inst, const IntVector& p);

Objective energy_objective(const EnergyInstance& inst);

struct CutArc {
  std::size_t from = 0;
  std::size_t to = 0;
  std::int64_t capacity = 0;
};

// Nodes 0..n-1 are variables, n is the source and n+1 the sink. d_i = 1 iff
// i is on the source side, and g(p + sign·d) = constant + cut(d) whenever
// the right side is finite.
struct CutGraph {
  std::size_t node_count = 0;
  std::size_t source = 0;
  std::size_t sink = 0;
  std::vector<CutArc> arcs;
  std::int64_t constant = 0;
  std::int64_t big_m = 0;
};

CutGraph build_cut_graph(const EnergyInstance& inst, const IntVector& p, int sign);

struct MinCut {
  std::int64_t value = 0;
  std::vector<bool> source_side;  // inclusion-minimal
};

MinCut dinic_min_cut(const CutGraph& graph);

struct EnergyDirection {
  Direction direction;
  std::int64_t improvement = 0;  // g(p + d) - g(p) <= 0
};

// Best direction in N± by one cut per sign; + wins ties, and within a sign
// the inclusion-minimal minimizer is returned.
EnergyDirection energy_local_direction(const EnergyInstance& inst, const IntVector& p);

struct EnergyOptions {
  StepKind step = StepKind::Unit;
  DescentOptions descent;
};

struct EnergySolution {
  IntVector labels;
  std::int64_t value = 0;
  IntVector start;
  DescentTrace trace;
};

EnergySolution solve_energy(const EnergyInstance& inst, std::span<const double> p_hat,
                            const EnergyOptions& options = {});

struct BruteForceEnergy {
  std::int64_t value = 0;
  IntVector argmin;  // lexicographically smallest
};

BruteForceEnergy brute_force_energy(const EnergyInstance& inst);

// Two vertices, labels {0,1,2}, φ1 = (0,1,2), φ2 = (2,1,0), ψ = |δ|.
EnergyInstance toy_energy_instance();

}  // namespace dcaw
