#include "dcaw/matroid.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <queue>

#include "dcaw/errors.hpp"

namespace dcaw {

namespace {

constexpr std::int64_t kMaxWeight = std::int64_t{1} << 31;

ElementSet with(ElementSet x, std::optional<std::size_t> removed, std::size_t added) {
  if (removed) x.erase(std::remove(x.begin(), x.end(), *removed), x.end());
  x.push_back(added);
  return x;
}

std::vector<std::size_t> greedy_order(std::span<const std::int64_t> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  return order;
}

ElementSet sorted(ElementSet x) {
  std::sort(x.begin(), x.end());
  return x;
}

}  // namespace

std::size_t MatroidOracle::rank() const {
  if (!rank_) {
    ElementSet all(n_);
    std::iota(all.begin(), all.end(), 0);
    rank_ = rank_of(all);
  }
  return *rank_;
}

std::size_t MatroidOracle::rank_of(const ElementSet& x) const {
  ElementSet b;
  for (std::size_t e : x) {
    b.push_back(e);
    if (!test(b)) b.pop_back();
  }
  return b.size();
}

UniformMatroid::UniformMatroid(std::size_t n, std::size_t k) : MatroidOracle(n), k_(k) {
  if (k > n) throw ContractError("uniform matroid rank exceeds ground size");
}

bool UniformMatroid::test(const ElementSet& x) const { return x.size() <= k_; }

nlohmann::json UniformMatroid::to_json() const { return {{"kind", "uniform"}, {"rank", k_}}; }

PartitionMatroid::PartitionMatroid(std::size_t n, std::vector<ElementSet> blocks,
                                   std::vector<std::size_t> caps)
    : MatroidOracle(n), blocks_(std::move(blocks)), caps_(std::move(caps)), block_of_(n, n) {
  if (blocks_.size() != caps_.size()) throw DimensionError("one capacity per block required");
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    for (std::size_t e : blocks_[b]) {
      if (e >= n) throw DimensionError("block element out of range");
      if (block_of_[e] != n) throw ContractError("blocks overlap");
      block_of_[e] = b;
    }
  }
  for (std::size_t e = 0; e < n; ++e) {
    if (block_of_[e] == n) throw ContractError("blocks do not cover the ground set");
  }
}

bool PartitionMatroid::test(const ElementSet& x) const {
  std::vector<std::size_t> used(blocks_.size(), 0);
  for (std::size_t e : x) {
    if (e >= block_of_.size()) return false;
    if (++used[block_of_[e]] > caps_[block_of_[e]]) return false;
  }
  return true;
}

nlohmann::json PartitionMatroid::to_json() const {
  return {{"kind", "partition"}, {"blocks", blocks_}, {"caps", caps_}};
}

ExplicitBasesMatroid::ExplicitBasesMatroid(std::size_t n, std::vector<ElementSet> bases)
    : MatroidOracle(n) {
  if (bases.empty()) throw ContractError("a matroid has at least one base");
  for (const ElementSet& b : bases) {
    std::vector<bool> mask(n, false);
    for (std::size_t e : b) {
      if (e >= n) throw DimensionError("base element out of range");
      mask[e] = true;
    }
    bases_.push_back(std::move(mask));
  }
}

bool ExplicitBasesMatroid::test(const ElementSet& x) const {
  std::vector<bool> seen(ground_size(), false);
  for (std::size_t e : x) {
    if (e >= ground_size() || seen[e]) return false;
    seen[e] = true;
  }
  return std::any_of(bases_.begin(), bases_.end(), [&](const std::vector<bool>& b) {
    return std::all_of(x.begin(), x.end(), [&](std::size_t e) { return b[e]; });
  });
}

nlohmann::json ExplicitBasesMatroid::to_json() const {
  nlohmann::json bases = nlohmann::json::array();
  for (const auto& mask : bases_) {
    ElementSet b;
    for (std::size_t e = 0; e < mask.size(); ++e) {
      if (mask[e]) b.push_back(e);
    }
    bases.push_back(b);
  }
  return {{"kind", "bases"}, {"bases", bases}};
}

std::unique_ptr<MatroidOracle> matroid_from_json(std::size_t n, const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "uniform") return std::make_unique<UniformMatroid>(n, j.at("rank").get<std::size_t>());
    if (kind == "partition") {
      return std::make_unique<PartitionMatroid>(n, j.at("blocks").get<std::vector<ElementSet>>(),
                                                j.at("caps").get<std::vector<std::size_t>>());
    }
    if (kind == "bases") {
      return std::make_unique<ExplicitBasesMatroid>(n, j.at("bases").get<std::vector<ElementSet>>());
    }
    throw ParseError("unknown matroid kind '" + kind + "'");
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("matroid: ") + ex.what());
  }
}

ElementSet greedy_max_weight_base(const MatroidOracle& m, std::span<const std::int64_t> v) {
  if (v.size() != m.ground_size()) throw DimensionError("weight vector size mismatch");
  ElementSet b;
  for (std::size_t e : greedy_order(v)) {
    b.push_back(e);
    if (!m.is_independent(b)) b.pop_back();
  }
  return sorted(std::move(b));
}

std::size_t IndependenceView::rank_uncounted(const ElementSet& x) const {
  ElementSet b;
  for (std::size_t e : x) {
    b.push_back(e);
    if (!independent_uncounted(b)) b.pop_back();
  }
  return b.size();
}

bool PlainView::exchange(const ElementSet& i, std::optional<std::size_t> removed,
                         std::size_t added) const {
  return m_.is_independent(with(i, removed, added));
}

MvOracle::MvOracle(const MatroidOracle& m, std::vector<std::int64_t> v, ElementSet b_ref)
    : m_(m), v_(std::move(v)), b_ref_(sorted(std::move(b_ref))) {
  if (v_.size() != m.ground_size()) throw DimensionError("weight vector size mismatch");
}

ElementSet MvOracle::level_query(const ElementSet& x, std::int64_t level) const {
  ElementSet q;
  for (std::size_t e : x) {
    if (v_[e] == level) q.push_back(e);
  }
  for (std::size_t e : b_ref_) {
    if (v_[e] > level) q.push_back(e);
  }
  return q;
}

bool MvOracle::level_counts_fit(const ElementSet& i) const {
  std::vector<std::int64_t> levels;
  for (std::size_t e : i) levels.push_back(v_[e]);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  for (std::int64_t t : levels) {
    auto count = [&](const ElementSet& x) {
      return std::count_if(x.begin(), x.end(), [&](std::size_t e) { return v_[e] == t; });
    };
    if (count(i) > count(b_ref_)) return false;
  }
  return true;
}

bool MvOracle::exchange(const ElementSet& i, std::optional<std::size_t> removed,
                        std::size_t added) const {
  if (added >= v_.size()) throw DimensionError("element out of range");
  if (!level_counts_fit(i)) throw ContractError("mv_query: I is dependent in M^v");
  return m_.is_independent(level_query(with(i, removed, added), v_[added]));
}

bool MvOracle::independent_uncounted(const ElementSet& x) const {
  std::vector<std::int64_t> levels;
  for (std::size_t e : x) levels.push_back(v_[e]);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  return std::all_of(levels.begin(), levels.end(), [&](std::int64_t t) {
    return m_.is_independent_uncounted(level_query(x, t));
  });
}

IntersectionResult cardinality_intersection(const IndependenceView& m1,
                                            const IndependenceView& m2, bool verify) {
  const std::size_t n = m1.ground_size();
  if (m2.ground_size() != n) throw DimensionError("matroids live on different ground sets");
  constexpr std::size_t none = static_cast<std::size_t>(-1);

  IntersectionResult out;
  const std::uint64_t before = m1.calls() + m2.calls();
  std::vector<bool> in_i(n, false);
  while (true) {
    ElementSet current;
    for (std::size_t e = 0; e < n; ++e) {
      if (in_i[e]) current.push_back(e);
    }
    // Exchange graph, all arcs.
    std::vector<std::vector<std::size_t>> out_arcs(n);
    std::vector<bool> x1(n, false);
    std::vector<bool> x2(n, false);
    for (std::size_t z = 0; z < n; ++z) {
      if (in_i[z]) continue;
      x1[z] = m1.exchange(current, std::nullopt, z);
      x2[z] = m2.exchange(current, std::nullopt, z);
      for (std::size_t y : current) {
        if (m1.exchange(current, y, z)) out_arcs[y].push_back(z);
        if (m2.exchange(current, y, z)) out_arcs[z].push_back(y);
      }
    }
    for (auto& a : out_arcs) std::sort(a.begin(), a.end());

    std::vector<std::size_t> parent(n, none);
    std::vector<bool> seen(n, false);
    std::queue<std::size_t> q;
    for (std::size_t z = 0; z < n; ++z) {
      if (x1[z]) {
        seen[z] = true;
        q.push(z);
      }
    }
    std::size_t end = none;
    while (!q.empty() && end == none) {
      const std::size_t u = q.front();
      q.pop();
      if (x2[u]) {
        end = u;
        break;
      }
      for (std::size_t v : out_arcs[u]) {
        if (!seen[v]) {
          seen[v] = true;
          parent[v] = u;
          q.push(v);
        }
      }
    }
    if (end != none) {
      for (std::size_t u = end; u != none; u = parent[u]) in_i[u] = !in_i[u];
      continue;
    }

    // No augmenting path: X_min = vertices that can reach X2.
    std::vector<std::vector<std::size_t>> in_arcs(n);
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v : out_arcs[u]) in_arcs[v].push_back(u);
    }
    std::vector<bool> reach(n, false);
    for (std::size_t z = 0; z < n; ++z) {
      if (x2[z]) {
        reach[z] = true;
        q.push(z);
      }
    }
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (std::size_t v : in_arcs[u]) {
        if (!reach[v]) {
          reach[v] = true;
          q.push(v);
        }
      }
    }
    out.independent = current;
    out.calls = m1.calls() + m2.calls() - before;
    ElementSet rest;
    for (std::size_t e = 0; e < n; ++e) (reach[e] ? out.x_min : rest).push_back(e);
    if (verify) {
      const std::size_t bound = m1.rank_uncounted(out.x_min) + m2.rank_uncounted(rest);
      if (bound != current.size() || !m1.independent_uncounted(current) ||
          !m2.independent_uncounted(current)) {
        throw InvariantViolation("Edmonds equality failed in cardinality intersection");
      }
    }
    return out;
  }
}

WeightedMIInstance::WeightedMIInstance(std::shared_ptr<const MatroidOracle> m1,
                                       std::shared_ptr<const MatroidOracle> m2,
                                       std::vector<std::int64_t> w)
    : m1_(std::move(m1)), m2_(std::move(m2)), w_(std::move(w)) {
  if (!m1_ || !m2_) throw ContractError("matroid oracle missing");
  if (m1_->ground_size() != w_.size() || m2_->ground_size() != w_.size()) {
    throw DimensionError("matroids and weights disagree on the ground set size");
  }
  if (w_.empty()) throw DimensionError("ground set must be non-empty");
  for (std::int64_t x : w_) {
    if (x > kMaxWeight || x < -kMaxWeight) throw OverflowError("weight exceeds 2^31 in magnitude");
  }
  rank_ = m1_->rank();
  if (m2_->rank() != rank_) throw ContractError("matroids have different ranks");
  const auto common = cardinality_intersection(PlainView(*m1_), PlainView(*m2_), false);
  if (common.independent.size() != rank_) throw ContractError("matroids have no common base");
  // Load-time checks are not part of any solve.
  m1_->reset_calls();
  m2_->reset_calls();
}

std::int64_t WeightedMIInstance::max_abs_weight() const noexcept {
  std::int64_t m = 0;
  for (std::int64_t x : w_) m = std::max(m, x < 0 ? -x : x);
  return m;
}

nlohmann::json WeightedMIInstance::to_json() const {
  return {{"type", "matroid"}, {"n", w_.size()}, {"m1", m1_->to_json()},
          {"m2", m2_->to_json()}, {"w", w_}};
}

WeightedMIInstance WeightedMIInstance::from_json(const nlohmann::json& j) {
  try {
    if (j.at("type").get<std::string>() != "matroid") throw ParseError("not a matroid instance");
    const auto n = j.at("n").get<std::size_t>();
    return WeightedMIInstance(matroid_from_json(n, j.at("m1")), matroid_from_json(n, j.at("m2")),
                              j.at("w").get<std::vector<std::int64_t>>());
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("matroid instance: ") + ex.what());
  }
}

std::int64_t dual_value(const WeightedMIInstance& inst, const IntVector& p) {
  if (p.size() != inst.ground_size()) throw DimensionError("dual vector size mismatch");
  std::vector<std::int64_t> q(p.size());
  for (std::size_t e = 0; e < p.size(); ++e) q[e] = inst.weights()[e] - p[e];
  std::int64_t total = 0;
  for (std::size_t e : greedy_max_weight_base(inst.m1(), p.values())) total += p[e];
  for (std::size_t e : greedy_max_weight_base(inst.m2(), q)) total += q[e];
  return total;
}

Objective matroid_dual_objective(const WeightedMIInstance& inst) {
  return {inst.ground_size(), ConvexityClass::L,
          [&inst](const IntVector& p) { return Extended(dual_value(inst, p)); }};
}

MatroidDirection matroid_local_direction(const WeightedMIInstance& inst, const IntVector& p) {
  if (p.size() != inst.ground_size()) throw DimensionError("dual vector size mismatch");
  std::vector<std::int64_t> q(p.size());
  for (std::size_t e = 0; e < p.size(); ++e) q[e] = inst.weights()[e] - p[e];
  const MvOracle m1p(inst.m1(), p.values(), greedy_max_weight_base(inst.m1(), p.values()));
  const MvOracle m2q(inst.m2(), q, greedy_max_weight_base(inst.m2(), q));
  IntersectionResult res = cardinality_intersection(m1p, m2q);
  MatroidDirection out;
  out.improvement =
      static_cast<std::int64_t>(res.independent.size()) - static_cast<std::int64_t>(inst.rank());
  out.independent = std::move(res.independent);
  if (out.improvement < 0) out.direction.support = std::move(res.x_min);
  return out;
}

std::int64_t matroid_step_length(const WeightedMIInstance& inst, const IntVector& p,
                                 const Direction& x) {
  const auto rw = static_cast<std::int64_t>(inst.rank()) * inst.max_abs_weight();
  const std::int64_t cap = std::max(4 * rw + 1, dual_value(inst, p) + rw);
  try {
    return long_step_length(matroid_dual_objective(inst), p, x, cap);
  } catch (const UnboundedDirectionError& ex) {
    throw InvariantViolation(std::string("matroid step exceeded its cap: ") + ex.what());
  }
}

MatroidSolution solve_matroid_intersection(const WeightedMIInstance& inst,
                                           std::span<const double> p_hat,
                                           const MatroidOptions& options) {
  if (p_hat.size() != inst.ground_size()) throw DimensionError("prediction size mismatch");
  const std::uint64_t calls_before = inst.total_calls();
  MatroidSolution out;
  out.start = round_ties_down(snap_half_integers(p_hat));

  ElementSet last;
  const Objective g = matroid_dual_objective(inst);
  LocalOracle local = [&](const IntVector& p, Extended current) -> LocalStep {
    MatroidDirection dir = matroid_local_direction(inst, p);
    last = dir.independent;
    return {std::move(dir.direction), current + Extended(dir.improvement)};
  };
  const StepRule rule = options.step == StepKind::Unit
                            ? StepRule::unit()
                            : StepRule::custom([&](const IntVector& p, const Direction& d) {
                                return matroid_step_length(inst, p, d);
                              });
  DescentResult res = steepest_descent(g, local, rule, out.start, options.descent);
  out.dual = res.point;
  out.trace = std::move(res.trace);
  out.trace.oracle_calls = inst.total_calls() - calls_before;
  out.base = last;
  for (std::size_t e : out.base) out.weight += inst.weights()[e];
  out.certified = out.base.size() == inst.rank() && inst.m1().is_independent_uncounted(out.base) &&
                  inst.m2().is_independent_uncounted(out.base) &&
                  res.value == Extended(out.weight);
  if (!out.certified) throw InvariantViolation("weight-splitting certificate failed");
  return out;
}

double normalized_dual_norm(const WeightedMIInstance& inst, const IntVector& p) {
  if (matroid_local_direction(inst, p).improvement != 0) {
    throw ContractError("normalized_dual_norm needs an optimal dual");
  }
  const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
  return static_cast<double>(*hi - *lo) / 2.0;
}

LNatSystem matroid_optimal_face(const WeightedMIInstance& inst, const ElementSet& base) {
  const std::size_t n = inst.ground_size();
  std::vector<bool> in_b(n, false);
  for (std::size_t e : base) in_b[e] = true;
  const auto& w = inst.weights();
  std::vector<DifferenceBound> gamma;
  for (std::size_t i : base) {
    for (std::size_t j = 0; j < n; ++j) {
      if (in_b[j]) continue;
      const ElementSet swapped = with(base, i, j);
      if (inst.m1().is_independent_uncounted(swapped)) gamma.push_back({i, j, 0});
      if (inst.m2().is_independent_uncounted(swapped)) gamma.push_back({j, i, w[i] - w[j]});
    }
  }
  return LNatSystem(n, std::vector<Bound>(n), std::vector<Bound>(n), std::move(gamma));
}

BruteForceIntersection brute_force_intersection(const WeightedMIInstance& inst) {
  const std::size_t n = inst.ground_size();
  if (n > kMaxBruteForceGround) throw CapacityError("brute-force intersection needs n <= 20");
  BruteForceIntersection out;
  bool any = false;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != inst.rank()) continue;
    ElementSet b;
    std::int64_t weight = 0;
    for (std::size_t e = 0; e < n; ++e) {
      if (mask >> e & 1u) {
        b.push_back(e);
        weight += inst.weights()[e];
      }
    }
    if (!inst.m1().is_independent_uncounted(b) || !inst.m2().is_independent_uncounted(b)) continue;
    if (!any || weight > out.weight) {
      any = true;
      out.weight = weight;
      out.optimal.clear();
    }
    if (weight == out.weight) out.optimal.push_back(b);
  }
  if (!any) throw ContractError("no common base");
  return out;
}

WeightedMIInstance tight_partition_instance(std::size_t n, std::int64_t w) {
  if (n < 3 || n % 2 == 0) throw DimensionError("tight family needs odd n >= 3");
  std::vector<ElementSet> b1{{0}};
  std::vector<std::size_t> c1{0};
  for (std::size_t i = 1; i + 1 < n; i += 2) {
    b1.push_back({i, i + 1});
    c1.push_back(1);
  }
  std::vector<ElementSet> b2;
  std::vector<std::size_t> c2;
  for (std::size_t i = 0; i + 1 < n; i += 2) {
    b2.push_back({i, i + 1});
    c2.push_back(1);
  }
  b2.push_back({n - 1});
  c2.push_back(0);
  std::vector<std::int64_t> weights(n);
  for (std::size_t i = 0; i < n; ++i) weights[i] = (i % 2 == 0) ? w : -w;
  return WeightedMIInstance(std::make_shared<PartitionMatroid>(n, std::move(b1), std::move(c1)),
                            std::make_shared<PartitionMatroid>(n, std::move(b2), std::move(c2)),
                            std::move(weights));
}

IntVector tight_partition_witness(std::size_t n, std::int64_t w) {
  if (n < 3 || n % 2 == 0) throw DimensionError("tight family needs odd n >= 3");
  const auto r = static_cast<std::int64_t>((n - 1) / 2);
  // 0-based: p[n-1] = -rW, p[2k-1] = p[2k], p[2k-2] = p[2k-1] + 2W.
  std::vector<std::int64_t> p(n);
  p[n - 1] = -r * w;
  for (std::size_t i = n - 1; i >= 2; i -= 2) {
    p[i - 1] = p[i];
    p[i - 2] = p[i - 1] + 2 * w;
  }
  return IntVector(std::move(p));
}

}  // namespace dcaw
