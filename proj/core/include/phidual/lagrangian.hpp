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

enum class PerturbationKind { constraint, fenchel, custom };
std::string_view to_string(PerturbationKind kind);

// Two-argument function p(x, y) with p(x, y0) = f(x).
//
//   constraint  p(x, y) = f(x) if g_i(x) <= y_i for all i, else +inf; y0 = 0
//   fenchel     p(x, y) = g(x) + h(x - y);                         y0 = 0
//   custom      an expression over x1..xn (x) and x(n+1)..x(n+m) (y), with
//               optional indicator constraints over the same variables
class PerturbationFunction {
 public:
  static PerturbationFunction constraint(ObjectiveFunction f, std::vector<Expression> g);
  static PerturbationFunction fenchel(ObjectiveFunction g, ObjectiveFunction h);
  static PerturbationFunction custom(ObjectiveFunction joint, std::size_t x_dim, Point anchor);

  PerturbationKind kind() const noexcept { return kind_; }
  std::size_t x_dim() const noexcept { return x_dim_; }
  std::size_t y_dim() const noexcept { return y_dim_; }
  const Point& anchor() const noexcept { return anchor_; }
  const Box& x_domain() const noexcept { return x_domain_; }

  ExtendedValue operator()(std::span<const double> x, std::span<const double> y) const;
  // f(x) = p(x, y0).
  ExtendedValue objective(std::span<const double> x) const;

  // constraint kind only.
  const ObjectiveFunction& base_objective() const;
  const std::vector<Expression>& constraint_functions() const;
  std::vector<double> constraint_values(std::span<const double> x) const;

  // fenchel kind only.
  const ObjectiveFunction& fenchel_g() const;
  const ObjectiveFunction& fenchel_h() const;

 private:
  PerturbationFunction() = default;

  PerturbationKind kind_ = PerturbationKind::custom;
  std::size_t x_dim_ = 0;
  std::size_t y_dim_ = 0;
  Point anchor_;
  Box x_domain_{{0.0}, {0.0}};
  std::vector<ObjectiveFunction> parts_;
  std::vector<Expression> constraints_;
};

// Dual class Ψ; the constant c is dropped since it cancels in L.
enum class DualClass { affine, quad_minorant };
std::string_view to_string(DualClass cls);
DualClass dual_class_from_string(std::string_view name);
ElementaryClass elementary_class(DualClass cls);

struct DualParameter {
  DualClass cls = DualClass::quad_minorant;
  double a = 0.0;
  std::vector<double> v;

  friend bool operator==(const DualParameter&, const DualParameter&) = default;
};

// Standard elementary function ψ(y) = -a|y|^2 + <v, y> (c = 0).
ElementaryFunction standard_psi(const DualParameter& psi);

// p*_x(ψ) = sup_{y ∈ grid} (ψ(y) - p(x, y)); -inf iff p(x, ·) ≡ +inf on the grid.
ExtendedValue psi_conjugate(const PerturbationFunction& p, std::span<const double> x,
                            const ElementaryFunction& psi, const Grid& y_grid);
ExtendedValue psi_conjugate(const PerturbationFunction& p, std::span<const double> x,
                            const DualParameter& psi, const Grid& y_grid);

// L(x, ψ) = ψ(y0) - p*_x(ψ).
//
// Evaluation route:
//   constraint + affine        f(x) + <v, G(x)> if v >= 0, else -inf (analytic)
//   constraint + quad, a > 0   closed-form augmented Lagrangian
//   constraint + quad, a = 0   f(x) - <v, G(x)> if v <= 0, else -inf
//   fenchel / custom           y-grid supremum
// On constraint perturbations the affine class is parameterized by the
// multiplier v, i.e. ψ(y) = -<v, y>; elsewhere ψ(y) = -a|y|^2 + <v, y>.
class Lagrangian {
 public:
  Lagrangian(PerturbationFunction p, DualClass cls, Grid y_grid);

  const PerturbationFunction& perturbation() const noexcept { return p_; }
  DualClass dual_class() const noexcept { return cls_; }
  const Grid& y_grid() const noexcept { return y_grid_; }

  // Elementary function on Y represented by a dual parameter.
  ElementaryFunction psi(const DualParameter& param) const;
  DualParameter parameter(const ParameterPoint& point) const;

  // Automatic route (see class comment).
  ExtendedValue operator()(std::span<const double> x, const DualParameter& param) const;
  // Always the y-grid supremum L = ψ(y0) - p*_x(ψ).
  ExtendedValue eval_grid(std::span<const double> x, const DualParameter& param) const;

  // True when operator() does not need the y-grid.
  bool has_closed_form() const noexcept { return p_.kind() == PerturbationKind::constraint; }

  // L(x, ψ) for every x in x_grid and every parameter: row-major [x][ψ].
  std::vector<ExtendedValue> surface(const Grid& x_grid,
                                     std::span<const DualParameter> params) const;

 private:
  PerturbationFunction p_;
  DualClass cls_;
  Grid y_grid_;
};

ExtendedValue lagrangian_eval(const Lagrangian& L, std::span<const double> x,
                              const DualParameter& psi);

// f(x) + Σ [-v_i max{g_i, v_i/2a} + a max{g_i, v_i/2a}^2]. Throws
// ValidationError for a <= 0 or x ∉ dom f.
double augmented_lagrangian_closed_form(const ObjectiveFunction& f, std::span<const Expression> g,
                                        std::span<const double> x, double a,
                                        std::span<const double> v);
// The same value written with u = -v.
double augmented_lagrangian_multiplier_form(const ObjectiveFunction& f,
                                            std::span<const Expression> g,
                                            std::span<const double> x, double a,
                                            std::span<const double> u);
// Inner minimizer y_i = max{g_i(x), v_i/2a}.
std::vector<double> augmented_inner_minimizer(std::span<const double> g_values, double a,
                                              std::span<const double> v);

// Rounding bound between the closed form and the y-grid form.
double lagrangian_tolerance(const Grid& y_grid, const DualParameter& psi);

struct DualSupremum {
  ExtendedValue value;
  std::optional<DualParameter> argmax;
  bool diverging = false;
};

// sup over the sampled dual parameters of L(x, ·).
DualSupremum sup_over_dual(const Lagrangian& L, std::span<const double> x,
                           const ParameterGrid& dual_pg);

// Default y grid: per coordinate, the range of g over the x grid together
// with 0 and every sampled v/2a, widened by 50%, on a lattice that contains
// y0 = 0. Fenchel kind reuses the x grid. `step` is the lattice spacing.
Grid default_y_grid(const PerturbationFunction& p, const Grid& x_grid,
                    const ParameterGrid& dual_pg, double step);

// CSV rows: x1..xn, a, v1..vm, L.
void write_lagrangian_surface_csv(std::ostream& os, const Lagrangian& L, const Grid& x_grid,
                                  std::span<const DualParameter> params);

}  // namespace phidual
