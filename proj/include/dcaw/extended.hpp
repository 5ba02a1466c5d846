#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "dcaw/errors.hpp"

namespace dcaw {

// A value in Z ∪ {+∞}. Addition saturates at +∞ and throws on finite
// int64 overflow.
class Extended {
 public:
  constexpr Extended() = default;
  constexpr Extended(std::int64_t value) : value_(value) {}  // NOLINT

  static constexpr Extended infinity() {
    Extended e;
    e.infinite_ = true;
    return e;
  }

  constexpr bool is_finite() const noexcept { return !infinite_; }
  constexpr bool is_infinite() const noexcept { return infinite_; }

  std::int64_t value() const {
    if (infinite_) throw ContractError("value() called on +inf");
    return value_;
  }

  friend Extended operator+(Extended a, Extended b) {
    if (a.infinite_ || b.infinite_) return infinity();
    std::int64_t out = 0;
    if (__builtin_add_overflow(a.value_, b.value_, &out)) {
      throw OverflowError("extended value addition overflow");
    }
    return Extended(out);
  }
  Extended& operator+=(Extended other) { return *this = *this + other; }

  friend constexpr bool operator==(Extended a, Extended b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend constexpr std::strong_ordering operator<=>(Extended a, Extended b) {
    if (a.infinite_ || b.infinite_) {
      return static_cast<int>(a.infinite_) <=> static_cast<int>(b.infinite_);
    }
    return a.value_ <=> b.value_;
  }

  std::string to_string() const {
    return infinite_ ? std::string("inf") : std::to_string(value_);
  }

 private:
  std::int64_t value_ = 0;
  bool infinite_ = false;
};

}  // namespace dcaw
