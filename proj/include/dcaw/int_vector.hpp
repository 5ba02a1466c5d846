#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace dcaw {

// Entries are kept within ±2^40 so that sums over n ≤ 2^20 coordinates and
// products with step lengths stay inside int64.
inline constexpr std::int64_t kMagnitudeCap = std::int64_t{1} << 40;

void check_magnitude(std::int64_t v, const char* what = "value");

// A point of Z^V. Every entry respects kMagnitudeCap.
class IntVector {
 public:
  IntVector() = default;
  explicit IntVector(std::size_t n, std::int64_t fill = 0);
  IntVector(std::initializer_list<std::int64_t> values);
  explicit IntVector(std::vector<std::int64_t> values);

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  std::int64_t operator[](std::size_t i) const { return values_[i]; }
  void set(std::size_t i, std::int64_t v);
  void add(std::size_t i, std::int64_t delta);

  const std::vector<std::int64_t>& values() const noexcept { return values_; }
  std::vector<double> as_reals() const;
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  friend bool operator==(const IntVector&, const IntVector&) = default;
  friend auto operator<=>(const IntVector& a, const IntVector& b) {
    return a.values_ <=> b.values_;
  }

  std::string to_string() const;

 private:
  std::vector<std::int64_t> values_;
};

IntVector operator-(const IntVector& a, const IntVector& b);
IntVector operator+(const IntVector& a, const IntVector& b);

// A move in N± = {0,+1}^V ∪ {0,-1}^V: sign · 1_support.
struct Direction {
  std::vector<std::size_t> support;  // sorted ascending
  int sign = +1;

  bool is_zero() const noexcept { return support.empty(); }
  IntVector to_vector(std::size_t n) const;
};

// p + step · d, checked against the magnitude cap.
IntVector moved(const IntVector& p, const Direction& d, std::int64_t step);

}  // namespace dcaw
