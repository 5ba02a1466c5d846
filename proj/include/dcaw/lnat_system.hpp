#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dcaw/int_vector.hpp"
#include "dcaw/norms.hpp"
#include "json.hpp"

namespace dcaw {

using Bound = std::optional<std::int64_t>;  // nullopt encodes ±∞

// p_j - p_i <= bound
struct DifferenceBound {
  std::size_t i = 0;
  std::size_t j = 0;
  std::int64_t bound = 0;

  friend bool operator==(const DifferenceBound&, const DifferenceBound&) = default;
};

// An L♮-convex set {p : alpha_i <= p_i <= beta_i, p_j - p_i <= gamma_ij}.
// With every box bound infinite it is L-convex. Non-emptiness is checked on
// construction; repeated (i, j) pairs keep the tightest bound.
class LNatSystem {
 public:
  LNatSystem(std::size_t n, std::vector<Bound> alpha, std::vector<Bound> beta,
             std::vector<DifferenceBound> gamma);

  static LNatSystem box(std::vector<Bound> alpha, std::vector<Bound> beta);
  static LNatSystem unconstrained(std::size_t n);

  std::size_t dimension() const noexcept { return n_; }
  const std::vector<Bound>& alpha() const noexcept { return alpha_; }
  const std::vector<Bound>& beta() const noexcept { return beta_; }
  // Sorted by (i, j), one entry per pair.
  const std::vector<DifferenceBound>& differences() const noexcept { return gamma_; }

  bool has_finite_box() const noexcept;
  bool is_bounded() const noexcept;

  bool contains(const IntVector& p) const;
  bool contains_relaxed(std::span<const double> q, double tol = 1e-9) const;

  // sup { p_j - p_i : p in conv(S) }, nullopt when unbounded. i or j equal
  // to dimension() stands for the fixed origin coordinate p_0 = 0, so
  // max_difference(n, j) is the largest feasible p_j.
  std::optional<std::int64_t> max_difference(std::size_t i, std::size_t j) const;

  nlohmann::json to_json() const;
  static LNatSystem from_json(const nlohmann::json& j);

 private:
  std::size_t n_;
  std::vector<Bound> alpha_;
  std::vector<Bound> beta_;
  std::vector<DifferenceBound> gamma_;
};

std::vector<double> project_box(std::span<const Bound> alpha,
                                std::span<const Bound> beta,
                                std::span<const double> p_hat);

struct Projection {
  std::vector<double> point;
  PmNorm distance;            // ‖point - p_hat‖∞±
  std::size_t node_count = 0;  // auxiliary graph size, n + 3
  std::size_t arc_count = 0;   // at most m + 4n + 2
};

// ℓ∞±-projection of p_hat onto conv(S) via shortest paths from an auxiliary
// source in the graph on V ∪ {0, s, t}.
Projection project_general(const LNatSystem& s, std::span<const double> p_hat);

// Rounds a point of conv(S) into S, asserting membership of the result.
IntVector round_into(const LNatSystem& s, std::span<const double> q);

}  // namespace dcaw
