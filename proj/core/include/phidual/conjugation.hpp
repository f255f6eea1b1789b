#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "phidual/elementary.hpp"
#include "phidual/objective.hpp"

namespace phidual {

// f*_Φ(φ) = sup_x (φ(x) - f(x)) over the grid, skipping +inf points.
// Returns -inf iff f ≡ +inf on the grid. Throws NumericalError if f takes
// -inf anywhere.
ExtendedValue conjugate(const GridFunction& f, const ElementaryFunction& phi);
ExtendedValue conjugate(const ObjectiveFunction& f, const ElementaryFunction& phi, const Grid& grid);

// φ ∈ supp f on the grid: accepted iff φ(x) <= f(x) + tolerance everywhere.
// `min_slack` is min_x (f(x) - φ(x)) and `point` is where it is attained,
// i.e. the maximally violating point on rejection.
struct SupportCertificate {
  bool accepted = false;
  ElementaryFunction phi;
  double min_slack = 0.0;
  Point point;
};

SupportCertificate is_in_support(const GridFunction& f, const ElementaryFunction& phi,
                                 double tolerance);
SupportCertificate is_in_support(const ObjectiveFunction& f, const ElementaryFunction& phi,
                                 const Grid& grid);

// Largest constant c for which phi.with_offset(c) ∈ supp f, i.e. -f*(phi_0).
ExtendedValue best_support_offset(const GridFunction& f, const ElementaryFunction& phi);

// Whether f admits any minorant from the class of `pg` beyond the sampling
// box. Probes f along coordinate and diagonal rays at radii 1e2, 1e3, 1e4
// and reports an empty support set when f + a_max|x|^2 + |ell|_max |x|
// keeps decreasing and ends below -1e8.
bool support_is_empty_beyond_box(const ObjectiveFunction& f, const ParameterGrid& pg);

// f** at every grid point: max over pg of φ(x) - f*(φ), with c eliminated.
std::vector<ExtendedValue> biconjugate_values(const GridFunction& f, const ParameterGrid& pg);

// f**(x) at a grid point x. Returns -inf everywhere when the support set is
// empty (see support_is_empty_beyond_box).
ExtendedValue biconjugate(const ObjectiveFunction& f, const ParameterGrid& pg, const Grid& grid,
                          std::span<const double> x);
ExtendedValue biconjugate(const GridFunction& f, const ParameterGrid& pg,
                          std::span<const double> x);

struct ConvexityReport {
  Grid grid;
  std::vector<ExtendedValue> f;
  std::vector<ExtendedValue> biconj;
  // f - f** per point; 0 where f = +inf and f** = +inf.
  std::vector<ExtendedValue> gap;
  ExtendedValue max_gap;
  std::size_t max_gap_index = 0;
  double tolerance = 0.0;
  bool phi_convex_on_grid = false;
};

ConvexityReport phi_convexity_report(const GridFunction& f, const ParameterGrid& pg);
ConvexityReport phi_convexity_report(const ObjectiveFunction& f, const ParameterGrid& pg,
                                     const Grid& grid);

// CSV with columns x1..xn, f, f_biconj, gap.
void write_gap_table_csv(std::ostream& os, const ConvexityReport& report);

enum class YoungVerdict { strict_inequality, equality_hence_subgradient };

// |f(x) + f*(φ) - φ(x)| <= tol::eq ⇔ φ ∈ ∂_Φ f(x). Throws ValidationError
// when f(x) is not finite.
YoungVerdict young_equality_check(const GridFunction& f, const ElementaryFunction& phi,
                                  std::span<const double> x);
YoungVerdict young_equality_check(const ObjectiveFunction& f, const ElementaryFunction& phi,
                                  std::span<const double> x, const Grid& grid);

// f(x) + f*(φ) - φ(x); nonnegative up to rounding (Fenchel-Young).
ExtendedValue young_residual(const GridFunction& f, const ElementaryFunction& phi,
                             std::span<const double> x);

}  // namespace phidual
