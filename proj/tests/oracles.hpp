#pragma once

// Independent reference computations for tests. Nothing here calls the
// solver code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "dcaw/energy.hpp"
#include "dcaw/int_vector.hpp"
#include "dcaw/lnat_system.hpp"
#include "dcaw/matching.hpp"
#include "dcaw/matroid.hpp"

namespace oracle {

inline double pm_norm(const std::vector<double>& v) {
  double plus = 0.0;
  double minus = 0.0;
  for (double x : v) {
    plus = std::max(plus, x);
    minus = std::max(minus, -x);
  }
  return plus + minus;
}

inline std::int64_t pm_distance(const dcaw::IntVector& a, const dcaw::IntVector& b) {
  std::int64_t plus = 0;
  std::int64_t minus = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    plus = std::max(plus, a[i] - b[i]);
    minus = std::max(minus, b[i] - a[i]);
  }
  return plus + minus;
}

// Membership of a real point in the relaxation, checked directly.
inline bool relaxed_member(const dcaw::LNatSystem& s, const std::vector<double>& q, double tol) {
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (s.alpha()[i] && q[i] < static_cast<double>(*s.alpha()[i]) - tol) return false;
    if (s.beta()[i] && q[i] > static_cast<double>(*s.beta()[i]) + tol) return false;
  }
  for (const auto& d : s.differences()) {
    if (q[d.j] - q[d.i] > static_cast<double>(d.bound) + tol) return false;
  }
  return true;
}

// A random L♮ system with finite box in [-range, range] and sparse
// difference bounds chosen so that a random anchor point stays feasible.
template <class Rng>
dcaw::LNatSystem random_system(std::size_t n, std::int64_t range, Rng& rng, double diff_prob = 0.5) {
  std::uniform_int_distribution<std::int64_t> coord(-range, range);
  std::uniform_int_distribution<std::int64_t> slack(0, 2);
  std::bernoulli_distribution coin(diff_prob);
  std::vector<std::int64_t> anchor(n);
  for (auto& a : anchor) a = coord(rng);
  std::vector<dcaw::Bound> alpha(n);
  std::vector<dcaw::Bound> beta(n);
  for (std::size_t i = 0; i < n; ++i) {
    alpha[i] = std::min(anchor[i] - slack(rng), anchor[i]);
    beta[i] = anchor[i] + slack(rng);
  }
  std::vector<dcaw::DifferenceBound> gamma;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && coin(rng)) gamma.push_back({i, j, anchor[j] - anchor[i] + slack(rng)});
    }
  }
  return dcaw::LNatSystem(n, alpha, beta, gamma);
}

// Every integer point of a bounded system, lexicographic order.
inline std::vector<dcaw::IntVector> enumerate(const dcaw::LNatSystem& s) {
  const std::size_t n = s.dimension();
  std::vector<dcaw::IntVector> out;
  std::vector<std::int64_t> cur(n);
  for (std::size_t i = 0; i < n; ++i) cur[i] = *s.alpha()[i];
  while (true) {
    dcaw::IntVector p(cur);
    bool ok = true;
    for (const auto& d : s.differences()) {
      if (cur[d.j] - cur[d.i] > d.bound) ok = false;
    }
    if (ok) out.push_back(p);
    std::size_t k = n;
    while (true) {
      if (k == 0) return out;
      --k;
      if (cur[k] < *s.beta()[k]) {
        ++cur[k];
        break;
      }
      cur[k] = *s.alpha()[k];
    }
  }
}

// Minimum ℓ∞± distance from p_hat to the relaxed set over a grid of the
// given spacing inside the box.
inline double grid_min_distance(const dcaw::LNatSystem& s, const std::vector<double>& p_hat,
                                double spacing) {
  const std::size_t n = s.dimension();
  std::vector<std::vector<double>> axes(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (double x = static_cast<double>(*s.alpha()[i]); x <= static_cast<double>(*s.beta()[i]) + 1e-12;
         x += spacing) {
      axes[i].push_back(x);
    }
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> idx(n, 0);
  std::vector<double> z(n);
  while (true) {
    for (std::size_t i = 0; i < n; ++i) z[i] = axes[i][idx[i]];
    if (relaxed_member(s, z, 1e-12)) {
      std::vector<double> diff(n);
      for (std::size_t i = 0; i < n; ++i) diff[i] = z[i] - p_hat[i];
      best = std::min(best, pm_norm(diff));
    }
    std::size_t k = n;
    while (true) {
      if (k == 0) return best;
      --k;
      if (++idx[k] < axes[k].size()) break;
      idx[k] = 0;
    }
  }
}

// Maximum-weight perfect matching by the O(h^3) Hungarian method on the
// negated weights; missing edges carry a prohibitive cost.
inline std::int64_t hungarian_max_weight(const dcaw::MatchingInstance& inst) {
  const std::size_t h = inst.half();
  const std::int64_t big = 4 * (inst.max_abs_weight() + 1) * static_cast<std::int64_t>(h + 1);
  std::vector<std::vector<std::int64_t>> cost(h + 1, std::vector<std::int64_t>(h + 1, big));
  std::vector<std::vector<bool>> present(h, std::vector<bool>(h, false));
  for (const auto& e : inst.edges()) {
    cost[e.left + 1][e.right + 1] = -e.weight;
    present[e.left][e.right] = true;
  }
  const std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(h + 1, 0), v(h + 1, 0);
  std::vector<std::size_t> match(h + 1, 0), way(h + 1, 0);
  for (std::size_t i = 1; i <= h; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<std::int64_t> minv(h + 1, inf);
    std::vector<bool> used(h + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      std::int64_t delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= h; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = cost[i0][j] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= h; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::int64_t total = 0;
  for (std::size_t j = 1; j <= h; ++j) {
    if (!present[match[j] - 1][j - 1]) return std::numeric_limits<std::int64_t>::min();
    total -= cost[match[j]][j];
  }
  return total;
}

// Enumerates every X ⊆ V (bitmask) and returns min_X f(X).
template <class F>
std::int64_t min_over_subsets(std::size_t n, F&& f) {
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) best = std::min(best, f(mask));
  return best;
}

inline dcaw::ElementSet mask_set(std::uint64_t mask, std::size_t n) {
  dcaw::ElementSet x;
  for (std::size_t e = 0; e < n; ++e) {
    if (mask >> e & 1u) x.push_back(e);
  }
  return x;
}

// All bases of a matroid by enumeration of the rank-sized subsets.
inline std::vector<dcaw::ElementSet> all_bases(const dcaw::MatroidOracle& m) {
  const std::size_t n = m.ground_size();
  const std::size_t r = m.rank();
  std::vector<dcaw::ElementSet> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) != r) continue;
    dcaw::ElementSet b = mask_set(mask, n);
    if (m.is_independent_uncounted(b)) out.push_back(std::move(b));
  }
  return out;
}

// max over bases of v(B), by enumeration.
inline std::int64_t max_base_weight(const std::vector<dcaw::ElementSet>& bases,
                                    const std::vector<std::int64_t>& v) {
  std::int64_t best = std::numeric_limits<std::int64_t>::min();
  for (const auto& b : bases) {
    std::int64_t s = 0;
    for (std::size_t e : b) s += v[e];
    best = std::max(best, s);
  }
  return best;
}

// Weight-splitting dual by base enumeration.
inline std::int64_t matroid_dual_enumerated(const std::vector<dcaw::ElementSet>& b1,
                                            const std::vector<dcaw::ElementSet>& b2,
                                            const std::vector<std::int64_t>& w,
                                            const std::vector<std::int64_t>& p) {
  std::vector<std::int64_t> q(w.size());
  for (std::size_t e = 0; e < w.size(); ++e) q[e] = w[e] - p[e];
  return max_base_weight(b1, p) + max_base_weight(b2, q);
}

// Min s-t cut by enumerating every source side over the variable nodes.
inline std::int64_t min_cut_enumerated(const dcaw::CutGraph& g) {
  const std::size_t n = g.node_count - 2;
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    auto on_source = [&](std::size_t v) {
      if (v == g.source) return true;
      if (v == g.sink) return false;
      return (mask >> v & 1u) != 0;
    };
    std::int64_t cut = 0;
    for (const auto& a : g.arcs) {
      if (on_source(a.from) && !on_source(a.to)) cut += a.capacity;
    }
    best = std::min(best, cut);
  }
  return best;
}

// Best g(p + sign·1_X) - g(p) over both signs by enumeration.
inline std::int64_t best_energy_move(const dcaw::EnergyInstance& inst, const dcaw::IntVector& p) {
  const std::size_t n = inst.size();
  const std::int64_t base = dcaw::energy_value(inst, p).value();
  std::int64_t best = 0;
  for (int sign : {+1, -1}) {
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
      std::vector<std::int64_t> q(p.begin(), p.end());
      bool in_range = true;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1u) q[i] += sign;
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (q[i] < inst.unary()[i].lo || q[i] > inst.unary()[i].hi()) in_range = false;
      }
      if (!in_range) continue;
      const dcaw::Extended v = dcaw::energy_value(inst, dcaw::IntVector(q));
      if (v.is_finite()) best = std::min(best, v.value() - base);
    }
  }
  return best;
}

}  // namespace oracle
