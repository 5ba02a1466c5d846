#include "dcaw/lnat_system.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dcaw/errors.hpp"
#include "shortest_paths.hpp"

namespace dcaw {

namespace {

using detail::Arc;
using detail::bellman_ford;

// Difference-constraint graph with the origin as node n.
std::vector<Arc<std::int64_t>> constraint_arcs(const LNatSystem& s) {
  const std::size_t n = s.dimension();
  std::vector<Arc<std::int64_t>> arcs;
  for (const auto& d : s.differences()) arcs.push_back({d.i, d.j, d.bound});
  for (std::size_t i = 0; i < n; ++i) {
    if (s.beta()[i]) arcs.push_back({n, i, *s.beta()[i]});
    if (s.alpha()[i]) arcs.push_back({i, n, -*s.alpha()[i]});
  }
  return arcs;
}

Bound bound_from_json(const nlohmann::json& v) {
  if (v.is_null()) return std::nullopt;
  return v.get<std::int64_t>();
}

}  // namespace

LNatSystem::LNatSystem(std::size_t n, std::vector<Bound> alpha, std::vector<Bound> beta,
                       std::vector<DifferenceBound> gamma)
    : n_(n), alpha_(std::move(alpha)), beta_(std::move(beta)) {
  if (n_ == 0) throw DimensionError("L-natural system needs dimension >= 1");
  if (alpha_.size() != n_ || beta_.size() != n_) {
    throw DimensionError("box bound count does not match dimension");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (alpha_[i]) check_magnitude(*alpha_[i], "alpha");
    if (beta_[i]) check_magnitude(*beta_[i], "beta");
    if (alpha_[i] && beta_[i] && *alpha_[i] > *beta_[i]) {
      throw EmptySetError("alpha_" + std::to_string(i) + " > beta_" + std::to_string(i));
    }
  }
  std::map<std::pair<std::size_t, std::size_t>, std::int64_t> tightest;
  for (const auto& d : gamma) {
    if (d.i >= n_ || d.j >= n_ || d.i == d.j) {
      throw DimensionError("difference constraint indices invalid");
    }
    check_magnitude(d.bound, "gamma");
    auto [it, inserted] = tightest.try_emplace({d.i, d.j}, d.bound);
    if (!inserted) it->second = std::min(it->second, d.bound);
  }
  for (const auto& [key, b] : tightest) gamma_.push_back({key.first, key.second, b});

  std::vector<std::optional<std::int64_t>> init(n_ + 1, std::int64_t{0});
  if (!bellman_ford<std::int64_t>(n_ + 1, constraint_arcs(*this), std::move(init))) {
    throw EmptySetError("constraint graph has a negative cycle; the set is empty");
  }
}

LNatSystem LNatSystem::box(std::vector<Bound> alpha, std::vector<Bound> beta) {
  const std::size_t n = alpha.size();
  return LNatSystem(n, std::move(alpha), std::move(beta), {});
}

LNatSystem LNatSystem::unconstrained(std::size_t n) {
  return LNatSystem(n, std::vector<Bound>(n), std::vector<Bound>(n), {});
}

bool LNatSystem::has_finite_box() const noexcept {
  return std::any_of(alpha_.begin(), alpha_.end(), [](const Bound& b) { return b.has_value(); }) ||
         std::any_of(beta_.begin(), beta_.end(), [](const Bound& b) { return b.has_value(); });
}

bool LNatSystem::is_bounded() const noexcept {
  return std::all_of(alpha_.begin(), alpha_.end(), [](const Bound& b) { return b.has_value(); }) &&
         std::all_of(beta_.begin(), beta_.end(), [](const Bound& b) { return b.has_value(); });
}

bool LNatSystem::contains(const IntVector& p) const {
  if (p.size() != n_) throw DimensionError("point dimension does not match system");
  for (std::size_t i = 0; i < n_; ++i) {
    if (alpha_[i] && p[i] < *alpha_[i]) return false;
    if (beta_[i] && p[i] > *beta_[i]) return false;
  }
  return std::all_of(gamma_.begin(), gamma_.end(),
                     [&](const DifferenceBound& d) { return p[d.j] - p[d.i] <= d.bound; });
}

bool LNatSystem::contains_relaxed(std::span<const double> q, double tol) const {
  if (q.size() != n_) throw DimensionError("point dimension does not match system");
  for (std::size_t i = 0; i < n_; ++i) {
    if (alpha_[i] && q[i] < static_cast<double>(*alpha_[i]) - tol) return false;
    if (beta_[i] && q[i] > static_cast<double>(*beta_[i]) + tol) return false;
  }
  return std::all_of(gamma_.begin(), gamma_.end(), [&](const DifferenceBound& d) {
    return q[d.j] - q[d.i] <= static_cast<double>(d.bound) + tol;
  });
}

std::optional<std::int64_t> LNatSystem::max_difference(std::size_t i, std::size_t j) const {
  if (i > n_ || j > n_) throw DimensionError("max_difference index out of range");
  std::vector<std::optional<std::int64_t>> init(n_ + 1);
  init[i] = 0;
  auto dist = bellman_ford<std::int64_t>(n_ + 1, constraint_arcs(*this), std::move(init));
  if (!dist) throw EmptySetError("constraint graph has a negative cycle");
  return (*dist)[j];
}

nlohmann::json LNatSystem::to_json() const {
  nlohmann::json j;
  j["n"] = n_;
  auto bounds = [](const std::vector<Bound>& b) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : b) arr.push_back(v ? nlohmann::json(*v) : nlohmann::json(nullptr));
    return arr;
  };
  j["alpha"] = bounds(alpha_);
  j["beta"] = bounds(beta_);
  j["gamma"] = nlohmann::json::array();
  for (const auto& d : gamma_) j["gamma"].push_back({d.i, d.j, d.bound});
  return j;
}

LNatSystem LNatSystem::from_json(const nlohmann::json& j) {
  try {
    const auto n = j.at("n").get<std::size_t>();
    std::vector<Bound> alpha(n), beta(n);
    if (j.contains("alpha")) {
      if (j["alpha"].size() != n) throw ParseError("alpha has wrong length");
      for (std::size_t i = 0; i < n; ++i) alpha[i] = bound_from_json(j["alpha"][i]);
    }
    if (j.contains("beta")) {
      if (j["beta"].size() != n) throw ParseError("beta has wrong length");
      for (std::size_t i = 0; i < n; ++i) beta[i] = bound_from_json(j["beta"][i]);
    }
    std::vector<DifferenceBound> gamma;
    if (j.contains("gamma")) {
      for (const auto& g : j["gamma"]) {
        if (g.size() != 3) throw ParseError("gamma entries must be [i, j, bound]");
        if (g[2].is_null()) continue;  // +∞ imposes nothing
        gamma.push_back({g[0].get<std::size_t>(), g[1].get<std::size_t>(),
                         g[2].get<std::int64_t>()});
      }
    }
    return LNatSystem(n, std::move(alpha), std::move(beta), std::move(gamma));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid constraint system: ") + e.what());
  }
}

std::vector<double> project_box(std::span<const Bound> alpha, std::span<const Bound> beta,
                                std::span<const double> p_hat) {
  if (alpha.size() != p_hat.size() || beta.size() != p_hat.size()) {
    throw DimensionError("box and point dimensions differ");
  }
  std::vector<double> out(p_hat.begin(), p_hat.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (beta[i]) out[i] = std::min(out[i], static_cast<double>(*beta[i]));
    if (alpha[i]) out[i] = std::max(out[i], static_cast<double>(*alpha[i]));
  }
  return out;
}

Projection project_general(const LNatSystem& s, std::span<const double> p_hat) {
  const std::size_t n = s.dimension();
  if (p_hat.size() != n) throw DimensionError("point dimension does not match system");
  for (double v : p_hat) {
    if (!std::isfinite(v)) throw ContractError("prediction has a non-finite entry");
  }

  // Nodes: V = 0..n-1, origin n, source n+1, sink n+2. Arc (u, v, l) encodes
  // q_v - q_u <= l for q = p - p_hat.
  const std::size_t origin = n, source = n + 1, sink = n + 2;
  std::vector<Arc<double>> arcs;
  for (const auto& d : s.differences()) {
    arcs.push_back({d.i, d.j, static_cast<double>(d.bound) - p_hat[d.j] + p_hat[d.i]});
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (s.alpha()[i]) arcs.push_back({i, origin, -static_cast<double>(*s.alpha()[i]) + p_hat[i]});
    if (s.beta()[i]) arcs.push_back({origin, i, static_cast<double>(*s.beta()[i]) - p_hat[i]});
  }
  for (std::size_t i = 0; i <= n; ++i) {
    arcs.push_back({source, i, 0.0});
    arcs.push_back({i, sink, 0.0});
  }

  // Forward potentials are distances from the source; backward potentials are
  // negated distances to the sink, found on the reversed graph. Both are
  // optimal shifts, so their midpoint is one too, and it is symmetric.
  std::vector<std::optional<double>> init(n + 3);
  init[source] = 0.0;
  auto fwd = bellman_ford<double>(n + 3, arcs, std::move(init), 1e-12);
  if (!fwd) throw EmptySetError("projection graph has a negative cycle; the set is empty");
  std::vector<Arc<double>> reversed;
  reversed.reserve(arcs.size());
  for (const auto& a : arcs) reversed.push_back({a.to, a.from, a.length});
  std::vector<std::optional<double>> init_rev(n + 3);
  init_rev[sink] = 0.0;
  auto bwd = bellman_ford<double>(n + 3, reversed, std::move(init_rev), 1e-12);
  if (!bwd) throw EmptySetError("projection graph has a negative cycle; the set is empty");

  Projection out;
  out.node_count = n + 3;
  out.arc_count = arcs.size();
  const double fwd_anchor = *(*fwd)[origin];
  const double bwd_anchor = *(*bwd)[origin];
  out.point.resize(n);
  std::vector<double> shift(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double forward = *(*fwd)[i] - fwd_anchor;
    const double backward = bwd_anchor - *(*bwd)[i];
    shift[i] = (forward + backward) / 2;
    out.point[i] = p_hat[i] + shift[i];
  }
  out.distance = linf_pm_norm(shift);
  return out;
}

IntVector round_into(const LNatSystem& s, std::span<const double> q) {
  if (!s.contains_relaxed(q)) {
    throw InvariantViolation("round_into: point is not in the convex hull of the set");
  }
  IntVector p = round_ties_down(snap_half_integers(q));
  if (!s.contains(p)) {
    throw InvariantViolation("rounded point " + p.to_string() + " left the L-natural set");
  }
  return p;
}

}  // namespace dcaw
