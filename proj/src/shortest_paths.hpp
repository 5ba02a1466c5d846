#pragma once

// Bellman–Ford shared by the L♮-set routines. Internal header.

#include <cstddef>
#include <optional>
#include <vector>

namespace dcaw::detail {

// x_to - x_from <= length
template <class W>
struct Arc {
  std::size_t from;
  std::size_t to;
  W length;
};

// Distances from the nodes with an initial label. Returns nullopt when a
// negative cycle is reachable. Unreached nodes stay nullopt.
template <class W>
std::optional<std::vector<std::optional<W>>> bellman_ford(
    std::size_t nodes, const std::vector<Arc<W>>& arcs,
    std::vector<std::optional<W>> dist, W tol = W{}) {
  for (std::size_t round = 0; round <= nodes; ++round) {
    bool changed = false;
    for (const auto& a : arcs) {
      if (!dist[a.from]) continue;
      const W cand = *dist[a.from] + a.length;
      if (!dist[a.to] || cand < *dist[a.to] - tol) {
        dist[a.to] = cand;
        changed = true;
      }
    }
    if (!changed) return dist;
  }
  return std::nullopt;
}

}  // namespace dcaw::detail
