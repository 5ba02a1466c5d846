#include "dcaw/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "dcaw/errors.hpp"
#include "dcaw/norms.hpp"

namespace dcaw {

namespace {

constexpr std::int64_t kMaxWeight = std::int64_t{1} << 31;
constexpr std::size_t kUnmatched = std::numeric_limits<std::size_t>::max();

using PairList = std::vector<std::pair<std::size_t, std::size_t>>;

PairList all_pairs(const std::vector<Edge>& edges) {
  PairList out;
  out.reserve(edges.size());
  for (const Edge& e : edges) out.emplace_back(e.left, e.right);
  return out;
}

void check_dual_dims(const MatchingInstance& inst, const DualPair& p) {
  if (p.s.size() != inst.half() || p.t.size() != inst.half()) {
    throw DimensionError("dual pair dimensions do not match the instance");
  }
}

// Hopcroft–Karp state over adjacency lists sorted by right index.
class HopcroftKarp {
 public:
  HopcroftKarp(std::size_t left, std::size_t right, const PairList& edges)
      : adj_(left), mate_l_(left, kUnmatched), mate_r_(right, kUnmatched), dist_(left) {
    for (const auto& [i, j] : edges) {
      if (i >= left || j >= right) throw DimensionError("edge endpoint out of range");
      adj_[i].push_back(j);
    }
    for (auto& a : adj_) {
      std::sort(a.begin(), a.end());
      a.erase(std::unique(a.begin(), a.end()), a.end());
    }
  }

  std::size_t run() {
    std::size_t size = 0;
    while (bfs()) {
      it_.assign(adj_.size(), 0);
      for (std::size_t u = 0; u < adj_.size(); ++u) {
        if (mate_l_[u] == kUnmatched && dfs(u)) ++size;
      }
    }
    return size;
  }

  // Alternating reachability from unmatched left vertices.
  void reachable(std::vector<bool>& z_left, std::vector<bool>& z_right) const {
    z_left.assign(adj_.size(), false);
    z_right.assign(mate_r_.size(), false);
    std::queue<std::size_t> q;
    for (std::size_t u = 0; u < adj_.size(); ++u) {
      if (mate_l_[u] == kUnmatched) {
        z_left[u] = true;
        q.push(u);
      }
    }
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (std::size_t v : adj_[u]) {
        if (z_right[v] || mate_l_[u] == v) continue;
        z_right[v] = true;
        const std::size_t w = mate_r_[v];
        if (w != kUnmatched && !z_left[w]) {
          z_left[w] = true;
          q.push(w);
        }
      }
    }
  }

  const std::vector<std::size_t>& mate_left() const { return mate_l_; }

 private:
  bool bfs() {
    constexpr std::size_t inf = std::numeric_limits<std::size_t>::max();
    std::queue<std::size_t> q;
    for (std::size_t u = 0; u < adj_.size(); ++u) {
      if (mate_l_[u] == kUnmatched) {
        dist_[u] = 0;
        q.push(u);
      } else {
        dist_[u] = inf;
      }
    }
    bool found = false;
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (std::size_t v : adj_[u]) {
        const std::size_t w = mate_r_[v];
        if (w == kUnmatched) {
          found = true;
        } else if (dist_[w] == inf) {
          dist_[w] = dist_[u] + 1;
          q.push(w);
        }
      }
    }
    return found;
  }

  bool dfs(std::size_t u) {
    for (std::size_t& k = it_[u]; k < adj_[u].size(); ++k) {
      const std::size_t v = adj_[u][k];
      const std::size_t w = mate_r_[v];
      if (w == kUnmatched || (dist_[w] == dist_[u] + 1 && dfs(w))) {
        mate_l_[u] = v;
        mate_r_[v] = u;
        ++k;
        return true;
      }
    }
    dist_[u] = std::numeric_limits<std::size_t>::max();
    return false;
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> mate_l_;
  std::vector<std::size_t> mate_r_;
  std::vector<std::size_t> dist_;
  std::vector<std::size_t> it_;
};

}  // namespace

MatchingInstance::MatchingInstance(std::size_t left_count, std::size_t right_count,
                                   std::vector<Edge> edges)
    : half_(left_count), edges_(std::move(edges)) {
  if (left_count != right_count) throw DimensionError("matching needs |L| = |R|");
  if (left_count == 0) throw DimensionError("matching needs at least one vertex per side");
  for (const Edge& e : edges_) {
    if (e.left >= half_ || e.right >= half_) throw DimensionError("edge endpoint out of range");
    if (e.weight > kMaxWeight || e.weight < -kMaxWeight) {
      throw OverflowError("edge weight exceeds 2^31 in magnitude");
    }
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.left, a.right) < std::pair(b.left, b.right);
  });
  for (std::size_t k = 1; k < edges_.size(); ++k) {
    if (edges_[k].left == edges_[k - 1].left && edges_[k].right == edges_[k - 1].right) {
      throw ContractError("duplicate edge (" + std::to_string(edges_[k].left) + ", " +
                          std::to_string(edges_[k].right) + ")");
    }
  }
  if (max_matching_min_cover(half_, half_, all_pairs(edges_)).matching_size != half_) {
    throw ContractError("graph has no perfect matching");
  }
}

std::int64_t MatchingInstance::max_abs_weight() const noexcept {
  std::int64_t w = 0;
  for (const Edge& e : edges_) w = std::max(w, e.weight < 0 ? -e.weight : e.weight);
  return w;
}

LNatSystem MatchingInstance::dual_domain() const {
  const std::size_t n = vertex_count();
  std::vector<DifferenceBound> gamma;
  gamma.reserve(edges_.size());
  for (const Edge& e : edges_) gamma.push_back({e.left, half_ + e.right, -e.weight});
  return LNatSystem(n, std::vector<Bound>(n), std::vector<Bound>(n), std::move(gamma));
}

nlohmann::json MatchingInstance::to_json() const {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : edges_) edges.push_back({e.left, e.right, e.weight});
  return {{"type", "matching"}, {"L", half_}, {"R", half_}, {"edges", edges}};
}

MatchingInstance MatchingInstance::from_json(const nlohmann::json& j) {
  try {
    if (j.at("type").get<std::string>() != "matching") throw ParseError("not a matching instance");
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (e.size() != 3) throw ParseError("edge entries are [i, j, w]");
      edges.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<std::int64_t>()});
    }
    return MatchingInstance(j.at("L").get<std::size_t>(), j.at("R").get<std::size_t>(),
                            std::move(edges));
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("matching instance: ") + ex.what());
  }
}

IntVector DualPair::joined() const {
  std::vector<std::int64_t> v(s.begin(), s.end());
  v.insert(v.end(), t.begin(), t.end());
  return IntVector(std::move(v));
}

DualPair DualPair::split(const IntVector& p, std::size_t half) {
  if (p.size() != 2 * half) throw DimensionError("dual vector has the wrong dimension");
  const auto& v = p.values();
  return {IntVector(std::vector<std::int64_t>(v.begin(), v.begin() + half)),
          IntVector(std::vector<std::int64_t>(v.begin() + half, v.end()))};
}

std::vector<double> RealDualPair::joined() const {
  std::vector<double> v(s);
  v.insert(v.end(), t.begin(), t.end());
  return v;
}

nlohmann::json RealDualPair::to_json() const { return {{"s", s}, {"t", t}}; }

RealDualPair RealDualPair::from_json(const nlohmann::json& j) {
  try {
    return {j.at("s").get<std::vector<double>>(), j.at("t").get<std::vector<double>>()};
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("dual prediction: ") + ex.what());
  }
}

DualValue dual_objective(const MatchingInstance& inst, const DualPair& p) {
  check_dual_dims(inst, p);
  DualValue out;
  for (std::size_t i = 0; i < inst.half(); ++i) out.objective += p.s[i] - p.t[i];
  out.feasible = std::all_of(inst.edges().begin(), inst.edges().end(), [&](const Edge& e) {
    return p.s[e.left] - p.t[e.right] >= e.weight;
  });
  return out;
}

Objective matching_dual_objective(const MatchingInstance& inst) {
  return {inst.vertex_count(), ConvexityClass::L, [&inst](const IntVector& p) {
            const DualValue v = dual_objective(inst, DualPair::split(p, inst.half()));
            return v.feasible ? Extended(v.objective) : Extended::infinity();
          }};
}

DualProjection project_dual(const MatchingInstance& inst, const RealDualPair& p_hat) {
  if (p_hat.s.size() != inst.half() || p_hat.t.size() != inst.half()) {
    throw DimensionError("prediction dimensions do not match the instance");
  }
  DualProjection out;
  out.epsilon = -std::numeric_limits<double>::infinity();
  for (const Edge& e : inst.edges()) {
    out.epsilon = std::max(out.epsilon,
                           static_cast<double>(e.weight) - p_hat.s[e.left] + p_hat.t[e.right]);
  }
  out.projected = p_hat;
  if (out.epsilon > 0) {
    const double half_eps = out.epsilon / 2;
    for (double& x : out.projected.s) x += half_eps;
    for (double& x : out.projected.t) x -= half_eps;
  }
  out.rounded = {round_ties_down(snap_half_integers(out.projected.s)),
                 round_ties_down(snap_half_integers(out.projected.t))};
  if (!dual_objective(inst, out.rounded).feasible) {
    throw InvariantViolation("rounded projection is not dual feasible");
  }
  return out;
}

std::vector<std::size_t> tight_edges(const MatchingInstance& inst, const DualPair& p) {
  check_dual_dims(inst, p);
  std::vector<std::size_t> out;
  const auto& edges = inst.edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::int64_t slack = p.s[edges[k].left] - p.t[edges[k].right] - edges[k].weight;
    if (slack < 0) throw InfeasibleDualError("dual violates edge " + std::to_string(k));
    if (slack == 0) out.push_back(k);
  }
  return out;
}

std::size_t CoverResult::cover_size() const {
  return static_cast<std::size_t>(std::count(cover_left.begin(), cover_left.end(), true) +
                                  std::count(cover_right.begin(), cover_right.end(), true));
}

CoverResult max_matching_min_cover(std::size_t left_count, std::size_t right_count,
                                   const PairList& edges) {
  HopcroftKarp hk(left_count, right_count, edges);
  CoverResult out;
  out.matching_size = hk.run();
  out.mate_of_left.resize(left_count);
  for (std::size_t u = 0; u < left_count; ++u) {
    if (hk.mate_left()[u] != kUnmatched) out.mate_of_left[u] = hk.mate_left()[u];
  }
  std::vector<bool> z_left;
  std::vector<bool> z_right;
  hk.reachable(z_left, z_right);
  out.cover_left.resize(left_count);
  for (std::size_t u = 0; u < left_count; ++u) out.cover_left[u] = !z_left[u];
  out.cover_right = z_right;
  if (out.cover_size() != out.matching_size) {
    throw InvariantViolation("vertex cover size differs from matching size");
  }
  return out;
}

std::int64_t matching_step_length(const MatchingInstance& inst, const DualPair& p,
                                  const CoverResult& cover) {
  check_dual_dims(inst, p);
  std::optional<std::int64_t> best;
  for (const Edge& e : inst.edges()) {
    if (cover.cover_left[e.left] || cover.cover_right[e.right]) continue;
    const std::int64_t slack = p.s[e.left] - p.t[e.right] - e.weight;
    if (!best || slack < *best) best = slack;
  }
  if (!best) throw InvariantViolation("no edge leaves the cover; the dual is unbounded");
  if (*best < 1) throw InvariantViolation("uncovered edge is tight");
  return *best;
}

MatchingSolution solve_matching(const MatchingInstance& inst, const RealDualPair& p_hat,
                                const MatchingOptions& options) {
  const std::size_t h = inst.half();
  MatchingSolution out;
  // An empty prediction means the zero prediction.
  const bool empty = p_hat.s.empty() && p_hat.t.empty();
  out.start = project_dual(inst, empty ? RealDualPair{std::vector<double>(h, 0.0),
                                                      std::vector<double>(h, 0.0)}
                                       : p_hat)
                  .rounded;
  const Objective g = matching_dual_objective(inst);

  CoverResult last;
  LocalOracle local = [&](const IntVector& p, Extended current) -> LocalStep {
    const DualPair dp = DualPair::split(p, h);
    PairList tight;
    for (std::size_t k : tight_edges(inst, dp)) {
      tight.emplace_back(inst.edges()[k].left, inst.edges()[k].right);
    }
    last = max_matching_min_cover(h, h, tight);
    if (last.matching_size == h) return {{}, current};
    Direction d;
    for (std::size_t i = 0; i < h; ++i) {
      if (last.cover_left[i]) d.support.push_back(i);
    }
    for (std::size_t j = 0; j < h; ++j) {
      if (!last.cover_right[j]) d.support.push_back(h + j);
    }
    const auto delta = static_cast<std::int64_t>(last.cover_size()) - static_cast<std::int64_t>(h);
    return {d, current + Extended(delta)};
  };
  const StepRule rule = options.step == StepKind::Unit
                            ? StepRule::unit()
                            : StepRule::custom([&](const IntVector& p, const Direction&) {
                                return matching_step_length(inst, DualPair::split(p, h), last);
                              });

  DescentResult res = steepest_descent(g, local, rule, out.start.joined(), options.descent);
  out.dual = DualPair::split(res.point, h);
  out.trace = std::move(res.trace);
  for (std::size_t i = 0; i < h; ++i) {
    const std::size_t j = *last.mate_of_left[i];
    out.matching.emplace_back(i, j);
  }
  std::int64_t weight = 0;
  for (const auto& [i, j] : out.matching) {
    const auto it = std::lower_bound(
        inst.edges().begin(), inst.edges().end(), std::pair(i, j),
        [](const Edge& e, const std::pair<std::size_t, std::size_t>& key) {
          return std::pair(e.left, e.right) < key;
        });
    weight += it->weight;
  }
  out.weight = weight;
  const DualValue dv = dual_objective(inst, out.dual);
  out.certified = dv.feasible && dv.objective == weight;
  if (!out.certified) throw InvariantViolation("strong duality certificate failed");
  return out;
}

BruteForceMatching brute_force_matching(const MatchingInstance& inst) {
  const std::size_t h = inst.half();
  if (h > kMaxBruteForceHalf) throw CapacityError("brute-force matching needs n/2 <= 8");
  std::vector<std::vector<std::optional<std::int64_t>>> w(
      h, std::vector<std::optional<std::int64_t>>(h));
  for (const Edge& e : inst.edges()) w[e.left][e.right] = e.weight;

  BruteForceMatching out;
  bool any = false;
  std::vector<std::size_t> perm(h);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::int64_t total = 0;
    bool ok = true;
    for (std::size_t i = 0; i < h && ok; ++i) {
      if (w[i][perm[i]]) {
        total += *w[i][perm[i]];
      } else {
        ok = false;
      }
    }
    if (!ok) continue;
    if (!any || total > out.weight) {
      any = true;
      out.weight = total;
      out.optimal.clear();
    }
    if (total == out.weight) out.optimal.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (!any) throw ContractError("graph has no perfect matching");
  return out;
}

LNatSystem optimal_dual_face(const MatchingInstance& inst, const PairList& matching) {
  const std::size_t h = inst.half();
  std::vector<DifferenceBound> gamma;
  for (const Edge& e : inst.edges()) gamma.push_back({e.left, h + e.right, -e.weight});
  for (const auto& [i, j] : matching) {
    const auto it = std::find_if(inst.edges().begin(), inst.edges().end(),
                                 [&](const Edge& e) { return e.left == i && e.right == j; });
    if (it == inst.edges().end()) throw ContractError("matching uses a non-edge");
    // s_i - t_j <= w_ij
    gamma.push_back({h + j, i, it->weight});
  }
  return LNatSystem(2 * h, std::vector<Bound>(2 * h), std::vector<Bound>(2 * h),
                    std::move(gamma));
}

MinCostDual to_min_cost_dual(const DualPair& p) {
  MinCostDual y;
  for (std::int64_t v : p.s) y.left.push_back(-v);
  for (std::int64_t v : p.t) y.right.push_back(v);
  return y;
}

DualPair from_min_cost_dual(const MinCostDual& y) {
  std::vector<std::int64_t> s;
  for (std::int64_t v : y.left) s.push_back(-v);
  return {IntVector(std::move(s)), IntVector(y.right)};
}

MatchingInstance path_counterexample_instance(std::size_t n, std::int64_t cost) {
  if (n < 2 || n % 2 != 0) throw DimensionError("path instance needs an even n >= 2");
  std::vector<Edge> edges;
  // 1-based vertex v: odd v -> left (v-1)/2, even v -> right v/2 - 1.
  auto side = [](std::size_t v) { return (v - 1) / 2; };
  for (std::size_t v = 1; v < n; ++v) {
    const std::int64_t c = (v % 2 == 1) ? cost : 0;
    const std::size_t odd = (v % 2 == 1) ? v : v + 1;
    const std::size_t even = (v % 2 == 1) ? v + 1 : v;
    edges.push_back({side(odd), side(even), -c});
  }
  return MatchingInstance(n / 2, n / 2, std::move(edges));
}

}  // namespace dcaw
