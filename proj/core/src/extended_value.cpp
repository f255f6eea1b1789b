#include "phidual/extended_value.hpp"

#include <cmath>
#include <ostream>

#include "phidual/errors.hpp"
#include "phidual/report_io.hpp"

namespace phidual {

ExtendedValue::ExtendedValue(double v) : value_(v) {
  if (std::isnan(v)) throw NumericalError("NaN is not an extended real");
}

ExtendedValue operator+(ExtendedValue lhs, ExtendedValue rhs) {
  const double s = lhs.value_ + rhs.value_;
  if (std::isnan(s)) {
    throw NumericalError("forbidden sum (+inf) + (-inf)");
  }
  return ExtendedValue(s, ExtendedValue::Raw{});
}

ExtendedValue ExtendedValue::scaled(double factor) const {
  if (!(factor >= 0.0) || !std::isfinite(factor)) {
    throw NumericalError("extended values scale only by finite nonnegative factors");
  }
  if (factor == 0.0) return ExtendedValue(0.0);
  return ExtendedValue(value_ * factor, Raw{});
}

std::string ExtendedValue::to_string() const { return format_number(*this); }

std::ostream& operator<<(std::ostream& os, ExtendedValue v) { return os << v.to_string(); }

}  // namespace phidual
