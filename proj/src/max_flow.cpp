#include "dcaw/max_flow.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "dcaw/errors.hpp"

namespace dcaw {

namespace {
constexpr std::size_t kNil = std::numeric_limits<std::size_t>::max();
}

MaxFlow::MaxFlow(std::size_t nodes) : head_(nodes, kNil), tail_(nodes, kNil) {}

std::size_t MaxFlow::add_arc(std::size_t from, std::size_t to, std::int64_t capacity) {
  if (from >= head_.size() || to >= head_.size()) throw DimensionError("arc endpoint out of range");
  if (capacity < 0) throw ContractError("negative arc capacity");
  const std::size_t id = to_.size() / 2;
  // Forward arcs are listed in insertion order per node.
  to_.push_back(to);
  cap_.push_back(capacity);
  next_.push_back(kNil);
  to_.push_back(from);
  cap_.push_back(0);
  next_.push_back(kNil);
  auto append = [&](std::size_t node, std::size_t e) {
    if (head_[node] == kNil) {
      head_[node] = e;
    } else {
      next_[tail_[node]] = e;
    }
    tail_[node] = e;
  };
  append(from, 2 * id);
  append(to, 2 * id + 1);
  return id;
}

bool MaxFlow::build_levels(std::size_t s, std::size_t t) {
  level_.assign(head_.size(), -1);
  std::queue<std::size_t> q;
  level_[s] = 0;
  q.push(s);
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop();
    for (std::size_t e = head_[u]; e != kNil; e = next_[e]) {
      if (cap_[e] > 0 && level_[to_[e]] < 0) {
        level_[to_[e]] = level_[u] + 1;
        q.push(to_[e]);
      }
    }
  }
  return level_[t] >= 0;
}

std::int64_t MaxFlow::push(std::size_t u, std::size_t t, std::int64_t limit) {
  if (u == t) return limit;
  for (std::size_t& e = iter_[u]; e != kNil; e = next_[e]) {
    const std::size_t v = to_[e];
    if (cap_[e] <= 0 || level_[v] != level_[u] + 1) continue;
    const std::int64_t got = push(v, t, std::min(limit, cap_[e]));
    if (got > 0) {
      cap_[e] -= got;
      cap_[e ^ 1] += got;
      return got;
    }
  }
  return 0;
}

std::int64_t MaxFlow::run(std::size_t source, std::size_t sink) {
  if (source == sink) throw ContractError("source equals sink");
  source_ = source;
  std::int64_t total = 0;
  while (build_levels(source, sink)) {
    iter_ = head_;
    while (const std::int64_t f = push(source, sink, std::numeric_limits<std::int64_t>::max())) {
      total += f;
    }
  }
  return total;
}

std::vector<bool> MaxFlow::source_side() const {
  std::vector<bool> seen(head_.size(), false);
  std::queue<std::size_t> q;
  seen[source_] = true;
  q.push(source_);
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop();
    for (std::size_t e = head_[u]; e != kNil; e = next_[e]) {
      if (cap_[e] > 0 && !seen[to_[e]]) {
        seen[to_[e]] = true;
        q.push(to_[e]);
      }
    }
  }
  return seen;
}

}  // namespace dcaw
