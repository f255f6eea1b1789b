#pragma once

#include <span>
#include <string>
#include <vector>

#include "phidual/expression.hpp"
#include "phidual/extended_value.hpp"
#include "phidual/grid.hpp"

namespace phidual {

// Extended-real function on R^n: an expression plus indicator constraints
// g_i(x) <= 0 whose violation sends the value to +inf. `domain` is the box
// that grids are drawn from; evaluation itself is defined everywhere.
class ObjectiveFunction {
 public:
  ObjectiveFunction(Expression expression, std::vector<Expression> constraints, Box domain);

  static ObjectiveFunction parse(const std::string& expression,
                                 const std::vector<std::string>& constraints, Box domain);

  std::size_t dim() const noexcept { return domain_.dim(); }
  const Expression& expression() const noexcept { return expression_; }
  const std::vector<Expression>& constraints() const noexcept { return constraints_; }
  const Box& domain() const noexcept { return domain_; }

  // Throws NumericalError when the expression yields NaN.
  ExtendedValue operator()(std::span<const double> x) const;

  bool feasible(std::span<const double> x) const;

  // Values on every grid point. Throws ValidationError when the grid is not
  // inside the domain box.
  GridFunction sample(const Grid& grid) const;

 private:
  Expression expression_;
  std::vector<Expression> constraints_;
  Box domain_;
};

Extremum grid_extremum(const ObjectiveFunction& f, const Grid& grid, ExtremumMode mode);

}  // namespace phidual
