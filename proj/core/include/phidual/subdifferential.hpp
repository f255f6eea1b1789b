#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "phidual/elementary.hpp"
#include "phidual/objective.hpp"

namespace phidual {

enum class Verdict { holds, fails, undetermined };
std::string_view to_string(Verdict v);

struct SubgradientCheck {
  bool accepted = false;
  // min over grid of f(x) - f(x̄) - (φ(x) - φ(x̄)) + ε.
  double min_slack = 0.0;
  Point worst_point;
};

// f(x) - f(x̄) >= φ(x) - φ(x̄) - ε at every grid point, within tol::eq.
// Throws ValidationError when f(x̄) is not finite or x̄ is off the grid.
SubgradientCheck is_subgradient(const GridFunction& f, const ElementaryFunction& phi,
                                std::span<const double> xbar, double eps);
SubgradientCheck is_subgradient(const ObjectiveFunction& f, const ElementaryFunction& phi,
                                std::span<const double> xbar, double eps, const Grid& grid);

// (a, v) as a Φ_lsc-subgradient: f(x) - f(x̄) >= <v, x - x̄> - a|x|^2 + a|x̄|^2.
struct LscSubgradient {
  double a = 0.0;
  std::vector<double> v;

  friend bool operator==(const LscSubgradient&, const LscSubgradient&) = default;
};

struct SubdifferentialSample {
  Point base_point;
  double epsilon = 0.0;
  ElementaryClass cls = ElementaryClass::quad_minorant;
  std::vector<LscSubgradient> members;
  std::vector<double> slacks;
};

// Every (a, v) of pg that passes is_subgradient with the given ε. With ε > 0
// an empty result for a function the biconjugate test reports Φ-convex
// throws DiscretizationError (the sample contradicts ∂^ε f(x̄) ≠ ∅).
SubdifferentialSample estimate_subdifferential(const GridFunction& f, std::span<const double> xbar,
                                               double eps, const ParameterGrid& pg);
SubdifferentialSample estimate_subdifferential(const ObjectiveFunction& f,
                                               std::span<const double> xbar, double eps,
                                               const ParameterGrid& pg, const Grid& grid);

// CSV rows: a, v1..vn, slack.
void write_subdifferential_csv(std::ostream& os, const SubdifferentialSample& sample);

struct ZeroSubgradientResult {
  Verdict verdict = Verdict::undetermined;
  // 0 = λ p + (1 - λ) q within tol::hull, p ∈ co ∂f(x1), q ∈ co ∂h(x2).
  double lambda = 0.0;
  std::optional<LscSubgradient> p;
  std::optional<LscSubgradient> q;
  double residual = 0.0;
  std::size_t f_members = 0;
  std::size_t h_members = 0;
};

// 0 ∈ co(∂_lsc f(x1) ∪ ∂_lsc h(x2)) over the sampled subdifferentials.
// Undetermined when either sample is empty.
ZeroSubgradientResult zero_subgradient_condition(const GridFunction& f, const GridFunction& h,
                                                 std::span<const double> x1,
                                                 std::span<const double> x2,
                                                 const ParameterGrid& pg);
ZeroSubgradientResult zero_subgradient_condition(const ObjectiveFunction& f,
                                                 const ObjectiveFunction& h,
                                                 std::span<const double> x1,
                                                 std::span<const double> x2,
                                                 const ParameterGrid& pg, const Grid& grid);

struct ParaconvexityResult {
  // Smallest candidate C with f((x+y)/2) <= (f(x)+f(y))/2 + C|x-y|^2/4 + tol::eq
  // on every scanned pair.
  std::optional<double> modulus;
  // Least C the midpoint scan requires (may exceed every candidate).
  double required_midpoint = 0.0;
  // Least C required by the t-forms f(tx+(1-t)y) <= tf(x)+(1-t)f(y)+C t(1-t)|x-y|^2
  // and ... + C|x-y|^2 over t ∈ {1/3, 1/4}.
  double required_t_weighted = 0.0;
  double required_t_plain = 0.0;
  // The t-form requirements are consistent with the midpoint one.
  bool cross_check_ok = false;
  std::size_t pairs_scanned = 0;
  std::optional<std::pair<Point, Point>> worst_pair;
};

// Pairs whose endpoints are finite and selected by `mask` (all points when
// empty). A pair whose interior point is +inf counts as a violation.
ParaconvexityResult paraconvexity_modulus(const GridFunction& f,
                                          std::span<const double> candidates,
                                          const std::vector<bool>& mask = {},
                                          std::size_t pair_budget = 4'000'000);
ParaconvexityResult paraconvexity_modulus(const ObjectiveFunction& f, const Grid& grid,
                                          std::span<const double> candidates);

}  // namespace phidual
