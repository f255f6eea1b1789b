#include "phidual/objective.hpp"

#include <cmath>

#include "phidual/errors.hpp"
#include "phidual/parallel.hpp"

namespace phidual {

ObjectiveFunction::ObjectiveFunction(Expression expression, std::vector<Expression> constraints,
                                     Box domain)
    : expression_(std::move(expression)),
      constraints_(std::move(constraints)),
      domain_(std::move(domain)) {
  if (expression_.dim() != domain_.dim()) {
    throw ValidationError("objective expression dimension differs from its domain");
  }
  for (const auto& g : constraints_) {
    if (g.dim() != domain_.dim()) {
      throw ValidationError("constraint dimension differs from the objective domain");
    }
  }
}

ObjectiveFunction ObjectiveFunction::parse(const std::string& expression,
                                           const std::vector<std::string>& constraints,
                                           Box domain) {
  const std::size_t n = domain.dim();
  std::vector<Expression> gs;
  gs.reserve(constraints.size());
  for (const auto& c : constraints) gs.push_back(Expression::parse(c, n));
  return ObjectiveFunction(Expression::parse(expression, n), std::move(gs), std::move(domain));
}

bool ObjectiveFunction::feasible(std::span<const double> x) const {
  for (const auto& g : constraints_) {
    const double v = g(x);
    if (std::isnan(v)) throw NumericalError("constraint evaluated to NaN");
    if (v > 0.0) return false;
  }
  return true;
}

ExtendedValue ObjectiveFunction::operator()(std::span<const double> x) const {
  if (x.size() != dim()) throw ValidationError("point has the wrong dimension");
  if (!feasible(x)) return ExtendedValue::pos_inf();
  const double v = expression_(x);
  if (std::isnan(v)) throw NumericalError("objective evaluated to NaN");
  return ExtendedValue(v);
}

GridFunction ObjectiveFunction::sample(const Grid& grid) const {
  if (grid.dim() != dim()) throw ValidationError("grid dimension differs from the objective");
  if (!domain_.contains(grid.box())) {
    throw ValidationError("grid box lies outside the objective domain");
  }
  std::vector<ExtendedValue> values(grid.size());
  parallel_chunks(grid.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) values[i] = (*this)(grid.point(i));
  });
  return GridFunction(grid, std::move(values));
}

Extremum grid_extremum(const ObjectiveFunction& f, const Grid& grid, ExtremumMode mode) {
  return grid_extremum(f.sample(grid), mode);
}

}  // namespace phidual
