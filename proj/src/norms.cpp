#include "dcaw/norms.hpp"

#include <algorithm>
#include <cmath>

#include "dcaw/errors.hpp"

namespace dcaw {

PmNorm linf_pm_norm(std::span<const double> p) {
  PmNorm out;
  for (double v : p) {
    out.plus = std::max(out.plus, v);
    out.minus = std::max(out.minus, -v);
  }
  out.total = out.plus + out.minus;
  return out;
}

std::int64_t linf_pm_distance(const IntVector& a, const IntVector& b) {
  if (a.size() != b.size()) throw DimensionError("vector size mismatch");
  std::int64_t plus = 0;
  std::int64_t minus = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    plus = std::max(plus, a[i] - b[i]);
    minus = std::max(minus, b[i] - a[i]);
  }
  return plus + minus;
}

std::int64_t linf_distance(const IntVector& a, const IntVector& b) {
  if (a.size() != b.size()) throw DimensionError("vector size mismatch");
  std::int64_t out = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out = std::max(out, a[i] > b[i] ? a[i] - b[i] : b[i] - a[i]);
  }
  return out;
}

double linf_norm(std::span<const double> p) {
  double out = 0.0;
  for (double v : p) out = std::max(out, std::abs(v));
  return out;
}

double linf_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("vector size mismatch");
  double out = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) out = std::max(out, std::abs(a[i] - b[i]));
  return out;
}

std::int64_t round_ties_down(double x) {
  if (!std::isfinite(x)) throw OverflowError("cannot round a non-finite value");
  const double r = std::ceil(x - 0.5);
  if (std::abs(r) > static_cast<double>(kMagnitudeCap)) {
    throw OverflowError("rounded value exceeds the magnitude cap 2^40");
  }
  return static_cast<std::int64_t>(r);
}

IntVector round_ties_down(std::span<const double> q) {
  std::vector<std::int64_t> out(q.size());
  std::transform(q.begin(), q.end(), out.begin(),
                 [](double x) { return round_ties_down(x); });
  return IntVector(std::move(out));
}

std::vector<double> snap_half_integers(std::span<const double> q, double tol) {
  std::vector<double> out(q.begin(), q.end());
  for (double& v : out) {
    const double half = std::round(2.0 * v) / 2.0;
    if (std::abs(v - half) <= tol) v = half;
  }
  return out;
}

}  // namespace dcaw
