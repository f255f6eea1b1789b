#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "phidual/elementary.hpp"
#include "phidual/lagrangian.hpp"

namespace phidual {

enum class IntersectionForm { general_t, lsc_sublevel, affine_algebraic };
std::string_view to_string(IntersectionForm form);

struct IntersectionQuery {
  ElementaryFunction phi1;
  ElementaryFunction phi2;
  double alpha = 0.0;
  // Uniform t grid on [0, 1]; odd counts contain t = 1/2.
  std::size_t t_steps = 257;
};

struct IntersectionVerdict {
  bool holds = false;
  std::optional<double> violating_t;
  std::optional<Point> violating_point;
  IntersectionForm form_used = IntersectionForm::general_t;
};

// For every t ∈ [0,1]:
//   [tφ1+(1-t)φ2 < α] ∩ [φ1 < α] = ∅  or  [tφ1+(1-t)φ2 < α] ∩ [φ2 < α] = ∅
// over grid points. Besides the uniform t grid, every t at which a grid point
// crosses the level is checked, so the verdict is exact on the grid.
IntersectionVerdict intersection_general(const IntersectionQuery& q, const Grid& grid);

// [φ1 < α] ∩ [φ2 < α] = ∅ over grid points. Throws ValidationError for
// quad_majorant inputs.
IntersectionVerdict intersection_lsc(const IntersectionQuery& q, const Grid& grid);

struct AffineIntersectionResult {
  bool holds = false;
  std::optional<double> t0;
};

// Some t0 ∈ [0,1] with t0 z1 + (1-t0) z2 = 0 (within tol::hull) and
// t0 d1 + (1-t0) d2 >= inf_f - eps.
AffineIntersectionResult intersection_affine_algebraic(std::span<const double> z1, double d1,
                                                       std::span<const double> z2, double d2,
                                                       double inf_f, double eps);

struct WitnessSearchOptions {
  // Support members kept per dual parameter, best first.
  std::size_t max_members_per_dual = 4096;
  std::size_t max_pairs = 100'000'000;
};

struct IntersectionWitness {
  double alpha = 0.0;
  DualParameter psi1;
  DualParameter psi2;
  ElementaryFunction phi1;
  ElementaryFunction phi2;
  IntersectionForm form_used = IntersectionForm::lsc_sublevel;
};

struct WitnessSearchResult {
  std::optional<IntersectionWitness> witness;
  std::size_t duals_considered = 0;
  std::size_t members_considered = 0;
  std::size_t pairs_checked = 0;
  // True when the pair budget stopped the search before full coverage.
  bool budget_hit = false;
};

// Enumerates dual parameters (ascending (a, |v|)) and, for each, the support
// members of L(·, ψ) drawn from pg with their largest admissible constant
// (descending φ(argmin L), ties to ascending (a, |ell|)). Returns the first
// pair in that order with the intersection property at α: the sublevel form
// for Φ_lsc classes, the general t form otherwise. A missing witness is a
// coverage report, never a proof that none exists.
WitnessSearchResult search_intersection_witness(const Lagrangian& L, double alpha,
                                                std::span<const DualParameter> dual_samples,
                                                const ParameterGrid& pg, const Grid& x_grid,
                                                const WitnessSearchOptions& options = {});

}  // namespace phidual
