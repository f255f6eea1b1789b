#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace phidual {

namespace detail {
struct Node;
struct Program;
}  // namespace detail

// Parsed arithmetic expression over variables x1..xn.
//
// Grammar (whitespace insignificant):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' ['-'] integer)?
//   primary := number | 'x' index | func '(' expr (',' expr)* ')' | '(' expr ')'
//   func    := abs | min | max | sin | cos | exp | sqrt
// abs, sin, cos, exp and sqrt take one argument; min and max take two or more.
// `^` accepts only a constant integer exponent.
class Expression {
 public:
  // Throws ParseError (with byte offset) on syntax errors, unknown
  // identifiers, arity mismatches and variables outside x1..xn.
  static Expression parse(std::string_view source, std::size_t n);

  static Expression constant(double value, std::size_t n);

  std::size_t dim() const noexcept { return dim_; }

  double operator()(std::span<const double> x) const;

  // Canonical fully parenthesized text; parse(to_string()) == *this.
  std::string to_string() const;

  // Sorted 0-based indices of the variables that appear.
  std::vector<std::size_t> free_variables() const;

  friend bool operator==(const Expression& lhs, const Expression& rhs);

 private:
  Expression(std::shared_ptr<const detail::Node> root, std::size_t n);

  std::shared_ptr<const detail::Node> root_;
  std::shared_ptr<const detail::Program> program_;
  std::size_t dim_ = 0;
};

}  // namespace phidual
