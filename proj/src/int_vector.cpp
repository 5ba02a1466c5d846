#include "dcaw/int_vector.hpp"

#include <sstream>

#include "dcaw/errors.hpp"

namespace dcaw {

void check_magnitude(std::int64_t v, const char* what) {
  if (v > kMagnitudeCap || v < -kMagnitudeCap) {
    throw OverflowError(std::string(what) + " " + std::to_string(v) +
                        " exceeds the magnitude cap 2^40");
  }
}

IntVector::IntVector(std::size_t n, std::int64_t fill) : values_(n, fill) {
  check_magnitude(fill);
}

IntVector::IntVector(std::initializer_list<std::int64_t> values)
    : IntVector(std::vector<std::int64_t>(values)) {}

IntVector::IntVector(std::vector<std::int64_t> values) : values_(std::move(values)) {
  for (auto v : values_) check_magnitude(v);
}

void IntVector::set(std::size_t i, std::int64_t v) {
  check_magnitude(v);
  values_.at(i) = v;
}

void IntVector::add(std::size_t i, std::int64_t delta) {
  set(i, values_.at(i) + delta);
}

std::vector<double> IntVector::as_reals() const {
  return {values_.begin(), values_.end()};
}

std::string IntVector::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i) os << ',';
    os << values_[i];
  }
  os << ')';
  return os.str();
}

IntVector operator-(const IntVector& a, const IntVector& b) {
  if (a.size() != b.size()) throw DimensionError("vector size mismatch");
  std::vector<std::int64_t> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return IntVector(std::move(out));
}

IntVector operator+(const IntVector& a, const IntVector& b) {
  if (a.size() != b.size()) throw DimensionError("vector size mismatch");
  std::vector<std::int64_t> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return IntVector(std::move(out));
}

IntVector Direction::to_vector(std::size_t n) const {
  IntVector d(n);
  for (auto i : support) d.set(i, sign);
  return d;
}

IntVector moved(const IntVector& p, const Direction& d, std::int64_t step) {
  check_magnitude(step, "step length");
  IntVector out = p;
  for (auto i : d.support) {
    if (i >= p.size()) throw DimensionError("direction index out of range");
    out.add(i, d.sign * step);
  }
  return out;
}

}  // namespace dcaw
