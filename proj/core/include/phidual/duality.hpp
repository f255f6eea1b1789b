#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phidual/lagrangian.hpp"
#include "phidual/subdifferential.hpp"

namespace phidual {

struct PrimalValue {
  // inf f over the feasible x-grid points.
  ExtendedValue direct;
  // inf_x sup_ψ L(x, ψ) over the sampled dual parameters.
  ExtendedValue minimax;
  std::optional<Point> argpoint;
  bool agree = false;
  bool all_infeasible = false;
};

// Both routes to val(L_P); `agree` is |direct - minimax| <= tol::gap.
PrimalValue primal_value(const Lagrangian& L, const Grid& x_grid, const ParameterGrid& dual_pg);

struct DualValue {
  ExtendedValue value;
  // Every sampled ψ whose dual function is within tol::argmax of the max.
  std::vector<DualParameter> argmax;
  // q(ψ) = inf_x L(x, ψ) per sampled parameter.
  std::vector<ExtendedValue> dual_function;
};

DualValue dual_value(const Lagrangian& L, const Grid& x_grid, const ParameterGrid& dual_pg);

struct ValueFunctionTable {
  GridFunction values;
  std::size_t anchor_index = 0;
};

// V(y) = inf_x p(x, y) on the y grid by x-grid scan.
ValueFunctionTable value_function(const PerturbationFunction& p, const Grid& x_grid,
                                  const Grid& y_grid);

// V**(y0) with Ψ sampled by dual_pg through L's parameter mapping.
ExtendedValue value_biconjugate_at_anchor(const ValueFunctionTable& table, const Lagrangian& L,
                                          const ParameterGrid& dual_pg);

struct Certifications {
  bool weak_duality_ok = false;
  bool zero_gap = false;
  // Sampled ∂_Ψ V(y0) nonempty.
  bool strong_duality = false;
  bool v_psi_convex_at_anchor = false;
  bool v_paraconvex = false;
};

struct DualityReport {
  ExtendedValue primal_value;
  ExtendedValue primal_minimax;
  ExtendedValue dual_value;
  // primal - dual (>= 0 up to rounding), +inf when primal is +inf.
  ExtendedValue gap;
  double tol_gap = 0.0;
  std::vector<DualParameter> dual_argmax;
  ExtendedValue v_at_anchor;
  ExtendedValue v_biconj_at_anchor;
  Certifications certifications;

  bool primal_routes_agree = false;
  // |dual - V**(y0)| <= tol_gap.
  bool dual_matches_v_biconj = false;
  // zero_gap ⇔ |V(y0) - V**(y0)| <= tol_gap.
  bool zero_gap_matches_value_function = false;

  // Sampled ∂_Ψ V(y0), as dual parameters.
  std::vector<DualParameter> subdifferential_at_anchor;
  // Dual argmax and ∂_Ψ V(y0) coincide within tol::hull.
  Verdict argmax_matches_subdifferential = Verdict::undetermined;

  std::optional<double> v_paraconvexity_modulus;
  bool anchor_interior = false;
  // When V is paraconvex with y0 interior (quad class): zero gap and a
  // nonempty dual argmax.
  Verdict paraconvex_consequence = Verdict::undetermined;
};

struct CertifyOptions {
  std::vector<double> paraconvexity_candidates = {0.01, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0};
};

DualityReport certify(const Lagrangian& L, const Grid& x_grid, const ParameterGrid& dual_pg,
                      const CertifyOptions& options = {});

// Dual parameters of pg through L's mapping, in pg order.
std::vector<DualParameter> dual_parameters(const Lagrangian& L, const ParameterGrid& dual_pg);

// Each member of `lhs` is within tol::hull of some member of `rhs` and vice versa.
bool parameter_sets_match(std::span<const DualParameter> lhs, std::span<const DualParameter> rhs,
                          double tolerance);

}  // namespace phidual
