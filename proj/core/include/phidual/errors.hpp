#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace phidual {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: invalid configuration, violated precondition, unknown name.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Expression syntax error; `offset` is the byte offset into the source.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : ValidationError(message + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// A computation left the extended reals: (+inf)+(-inf), NaN, or an
/// improper function where a proper one is required.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A sampled object came back empty where the theory guarantees it is not;
/// the parameter grid is too coarse.
class DiscretizationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace phidual
