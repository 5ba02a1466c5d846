#include "dcaw/descent.hpp"

#include <algorithm>

#include "dcaw/errors.hpp"

namespace dcaw {

namespace {

using Clock = std::chrono::steady_clock;

// Visits every integer point of a bounded box in lexicographic order.
template <class Visit>
void for_each_box_point(const LNatSystem& domain, Visit&& visit) {
  if (!domain.is_bounded()) {
    throw CapacityError("enumeration needs finite box bounds on every coordinate");
  }
  const std::size_t n = domain.dimension();
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const auto width = static_cast<std::uint64_t>(*domain.beta()[i] - *domain.alpha()[i] + 1);
    if (width > kMaxEnumeratedPoints || count * width > kMaxEnumeratedPoints) {
      throw CapacityError("domain has more than 10^7 points");
    }
    count *= width;
  }
  std::vector<std::int64_t> cur(n);
  for (std::size_t i = 0; i < n; ++i) cur[i] = *domain.alpha()[i];
  while (true) {
    IntVector p(cur);
    if (domain.contains(p)) visit(p);
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (cur[k] < *domain.beta()[k]) {
        ++cur[k];
        break;
      }
      cur[k] = *domain.alpha()[k];
      if (k == 0) return;
    }
  }
}

}  // namespace

DescentResult steepest_descent(const Objective& g, const LocalOracle& local, const StepRule& step,
                               const IntVector& p0, const DescentOptions& options) {
  const auto started = Clock::now();
  const std::size_t n = p0.size();
  if (n == 0) throw DimensionError("descent needs dimension >= 1");
  if (g.dimension != n) throw DimensionError("start point dimension does not match objective");

  Extended current = g(p0);
  if (current.is_infinite()) throw InfeasibleStartError("g(p0) = +inf at " + p0.to_string());

  const std::size_t cap = options.max_iterations != 0
                              ? options.max_iterations
                              : 10 * n * static_cast<std::size_t>(options.value_range);

  DescentResult out{p0, current, {}};
  DescentTrace& trace = out.trace;
  IntVector& p = out.point;
  while (true) {
    if (trace.iterations >= cap) {
      throw DivergenceError("steepest descent exceeded " + std::to_string(cap) +
                            " iterations; the local oracle is likely broken");
    }
    LocalStep ls = local(p, current);
    ++trace.iterations;
    ++trace.local_oracle_calls;
    if (ls.direction.is_zero() || !(ls.value < current)) {
      trace.records.push_back({{}, +1, 0, current});
      break;
    }

    std::int64_t lambda = 1;
    switch (step.kind()) {
      case StepRule::Kind::Unit:
        break;
      case StepRule::Kind::Long:
        lambda = long_step_length(g, p, ls.direction, step.cap());
        break;
      case StepRule::Kind::Custom:
        lambda = step.fn()(p, ls.direction);
        if (lambda < 1) throw InvariantViolation("custom step rule returned a non-positive step");
        break;
    }

    p = moved(p, ls.direction, lambda);
    const Extended next = lambda == 1 ? ls.value : g(p);
    if (!(next < current)) {
      throw InvariantViolation("objective failed to decrease along the chosen direction");
    }
    current = next;
    trace.records.push_back({ls.direction.support, ls.direction.sign, lambda, current});
  }
  out.value = current;
  trace.wall_time = std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - started);
  return out;
}

std::int64_t long_step_length(const Objective& g, const IntVector& p, const Direction& d,
                              std::int64_t cap) {
  if (cap < 1) throw ContractError("step cap must be positive");
  const Extended base = g(p);
  const Extended first = g(moved(p, d, 1));
  if (base.is_infinite() || first.is_infinite() || !(first < base)) {
    throw ContractError("long step requires g(p + d) < g(p) < +inf");
  }
  const __int128 slope = static_cast<__int128>(first.value()) - base.value();

  auto linear = [&](std::int64_t lambda) {
    IntVector q;
    try {
      q = moved(p, d, lambda);
    } catch (const OverflowError&) {
      return false;
    }
    const Extended v = g(q);
    if (v.is_infinite()) return false;
    return static_cast<__int128>(v.value()) - base.value() == slope * lambda;
  };

  std::int64_t lo = 1;
  std::int64_t hi = 1;
  while (true) {
    if (hi >= cap) {
      if (linear(cap + 1)) {
        throw UnboundedDirectionError("objective stays linear beyond the step cap " +
                                      std::to_string(cap));
      }
      if (linear(cap)) return cap;
      hi = cap;
      break;
    }
    const std::int64_t next = std::min(cap, hi * 2);
    if (!linear(next)) {
      hi = next;
      break;
    }
    lo = next;
    hi = next;
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (linear(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

LocalStep brute_force_local_oracle(const Objective& g, const IntVector& p, NeighborhoodMode mode) {
  const std::size_t n = p.size();
  if (n > kMaxBruteForceDimension) {
    throw CapacityError("brute-force local oracle supports n <= 22");
  }
  const Extended current = g(p);
  LocalStep best{{}, current};
  bool improving = false;

  const int signs[] = {+1, -1};
  const std::size_t sign_count = mode == NeighborhoodMode::PlusMinus ? 2 : 1;
  std::vector<std::size_t> support;
  for (std::size_t s = 0; s < sign_count; ++s) {
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
      support.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1U) support.push_back(i);
      }
      Direction d{support, signs[s]};
      IntVector q;
      try {
        q = moved(p, d, 1);
      } catch (const OverflowError&) {
        continue;
      }
      const Extended v = g(q);
      if (!(v < current)) continue;
      // Signs are scanned + first, so a strict test keeps + on full ties.
      const bool better =
          !improving || v < best.value ||
          (v == best.value && std::lexicographical_compare(support.begin(), support.end(),
                                                           best.direction.support.begin(),
                                                           best.direction.support.end()));
      if (better) {
        best = {std::move(d), v};
        improving = true;
      }
    }
  }
  return best;
}

LocalOracle make_brute_force_oracle(const Objective& g) {
  return [g](const IntVector& p, Extended) {
    return brute_force_local_oracle(g, p, neighborhood_for(g.convexity));
  };
}

Minimizer lexicographic_minimizer(const Objective& g, const LNatSystem& domain) {
  std::optional<Minimizer> best;
  for_each_box_point(domain, [&](const IntVector& p) {
    const Extended v = g(p);
    if (v.is_infinite()) return;
    if (!best || v < best->value) best = Minimizer{p, v};
  });
  if (!best) throw ContractError("objective is +inf on the whole domain");
  return *best;
}

std::vector<IntVector> all_minimizers(const Objective& g, const LNatSystem& domain) {
  std::vector<IntVector> out;
  Extended best = Extended::infinity();
  for_each_box_point(domain, [&](const IntVector& p) {
    const Extended v = g(p);
    if (v.is_infinite() || best < v) return;
    if (v < best) {
      best = v;
      out.clear();
    }
    out.push_back(p);
  });
  if (out.empty()) throw ContractError("objective is +inf on the whole domain");
  return out;
}

}  // namespace dcaw
