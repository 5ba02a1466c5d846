#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace dcaw {

// Dinic's blocking-flow algorithm on integer capacities. Arcs are stored in
// insertion order, which fixes the traversal order and hence the result.
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t nodes);

  // Returns the arc index.
  std::size_t add_arc(std::size_t from, std::size_t to, std::int64_t capacity);

  std::int64_t run(std::size_t source, std::size_t sink);

  // Nodes reachable from the source in the residual graph after run(): the
  // inclusion-minimal source side of a minimum cut.
  std::vector<bool> source_side() const;

  std::size_t node_count() const noexcept { return head_.size(); }
  std::size_t arc_count() const noexcept { return to_.size() / 2; }
  std::int64_t flow_on(std::size_t arc) const { return cap_[2 * arc + 1]; }

 private:
  bool build_levels(std::size_t s, std::size_t t);
  std::int64_t push(std::size_t u, std::size_t t, std::int64_t limit);

  std::vector<std::size_t> head_;
  std::vector<std::size_t> tail_;
  std::vector<std::size_t> next_;
  std::vector<std::size_t> to_;
  std::vector<std::int64_t> cap_;
  std::vector<int> level_;
  std::vector<std::size_t> iter_;
  std::size_t source_ = 0;
};

}  // namespace dcaw
