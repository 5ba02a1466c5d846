#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dcaw/int_vector.hpp"

namespace dcaw {

struct PmNorm {
  double plus = 0.0;
  double minus = 0.0;
  double total = 0.0;
};

// ‖p‖∞± = max(0, max_i p_i) + max(0, max_i -p_i).
PmNorm linf_pm_norm(std::span<const double> p);

// Integer ‖a - b‖∞±.
std::int64_t linf_pm_distance(const IntVector& a, const IntVector& b);
std::int64_t linf_distance(const IntVector& a, const IntVector& b);

double linf_norm(std::span<const double> p);
double linf_distance(std::span<const double> a, std::span<const double> b);

// Nearest integer with exact halves rounded down: ceil(x - 1/2).
std::int64_t round_ties_down(double x);
IntVector round_ties_down(std::span<const double> q);

// Moves entries lying within tol of a half-integer onto it, so that
// floating-point noise cannot split a tie differently across coordinates.
std::vector<double> snap_half_integers(std::span<const double> q,
                                       double tol = 1e-9);

}  // namespace dcaw
