#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>

namespace phidual {

// An element of R ∪ {-inf, +inf}. Finite values are never NaN, and the
// order is total. The forbidden sum (+inf) + (-inf) throws NumericalError.
class ExtendedValue {
 public:
  enum class Tag : std::uint8_t { finite, pos_inf, neg_inf };

  constexpr ExtendedValue() noexcept = default;

  // Accepts ±infinity as the matching tag; throws NumericalError on NaN.
  explicit ExtendedValue(double v);

  static constexpr ExtendedValue pos_inf() noexcept {
    return ExtendedValue(std::numeric_limits<double>::infinity(), Raw{});
  }
  static constexpr ExtendedValue neg_inf() noexcept {
    return ExtendedValue(-std::numeric_limits<double>::infinity(), Raw{});
  }

  Tag tag() const noexcept {
    if (value_ == std::numeric_limits<double>::infinity()) return Tag::pos_inf;
    if (value_ == -std::numeric_limits<double>::infinity()) return Tag::neg_inf;
    return Tag::finite;
  }
  bool is_finite() const noexcept { return tag() == Tag::finite; }
  bool is_pos_inf() const noexcept { return tag() == Tag::pos_inf; }
  bool is_neg_inf() const noexcept { return tag() == Tag::neg_inf; }

  // The finite value; ±infinity when the tag is not finite.
  constexpr double value() const noexcept { return value_; }

  ExtendedValue operator-() const noexcept { return ExtendedValue(-value_, Raw{}); }

  friend ExtendedValue operator+(ExtendedValue lhs, ExtendedValue rhs);
  friend ExtendedValue operator-(ExtendedValue lhs, ExtendedValue rhs) { return lhs + (-rhs); }

  // Scaling by a nonnegative real with the convention 0 * (±inf) = 0.
  ExtendedValue scaled(double factor) const;

  friend constexpr bool operator==(ExtendedValue lhs, ExtendedValue rhs) noexcept {
    return lhs.value_ == rhs.value_;
  }
  friend constexpr std::strong_ordering operator<=>(ExtendedValue lhs, ExtendedValue rhs) noexcept {
    if (lhs.value_ < rhs.value_) return std::strong_ordering::less;
    if (lhs.value_ > rhs.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  std::string to_string() const;

 private:
  struct Raw {};
  constexpr ExtendedValue(double v, Raw) noexcept : value_(v) {}

  double value_ = 0.0;
};

std::ostream& operator<<(std::ostream& os, ExtendedValue v);

}  // namespace phidual
