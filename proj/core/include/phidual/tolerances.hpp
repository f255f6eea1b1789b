#pragma once

#include <algorithm>
#include <cmath>

namespace phidual::tol {

// Pure evaluation comparisons (support membership).
inline constexpr double support = 1e-9;
// Equalities that go through one max/min reduction (Young, subgradients).
inline constexpr double eq = 1e-7;
// Euclidean distance in (a, v) space for convex-hull and set comparisons.
inline constexpr double hull = 1e-6;
// Slack in g_i(x) <= y_i for constraint perturbations, absorbing lattice rounding.
inline constexpr double feasibility = 1e-9;
// Ceiling above which a sampled sup over dual parameters counts as diverging.
inline constexpr double diverging_ceiling = 1e6;
// Absolute floor and relative part of the duality-gap tolerance.
inline constexpr double gap_absolute = 1e-6;
inline constexpr double gap_relative = 0.02;

inline double gap(double primal, double dual) {
  const double scale = std::max(std::abs(primal), std::abs(dual));
  return std::max(gap_relative * (std::isfinite(scale) ? scale : 0.0), gap_absolute);
}

// Near-tie tolerance for dual argmax sets.
inline double argmax(double dual) { return 1e-9 * std::max(1.0, std::abs(dual)); }

// Spatial discretization plus curvature truncation of the biconjugate.
inline double biconj(double grid_step, double a_max) {
  return 2.0 * grid_step + 2.0 / (1.0 + a_max);
}

}  // namespace phidual::tol
