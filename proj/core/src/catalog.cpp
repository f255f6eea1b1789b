#include "phidual/catalog.hpp"

#include "phidual/errors.hpp"

namespace phidual {

namespace {

Grid line_grid(double lo, double hi, std::size_t n) { return Grid(Box({lo}, {hi}), {n}); }

ParameterGrid affine_pg(std::size_t dim, double range, std::size_t per_dim,
                        std::vector<ParameterPoint> seeds = {}) {
  return ParameterGrid::affine(Grid::uniform(Box::cube(dim, -range, range), per_dim),
                               std::move(seeds));
}

ParameterGrid quad_pg(std::vector<double> a_values, std::size_t dim, double range,
                      std::size_t per_dim, std::vector<ParameterPoint> seeds = {}) {
  return ParameterGrid(ElementaryClass::quad_minorant, std::move(a_values),
                       Grid::uniform(Box::cube(dim, -range, range), per_dim), std::move(seeds));
}

// Constraint-kind 1-D entry: f with one constraint g(x) <= 0 on [lo, hi].
CatalogEntry constraint_entry(std::string name, std::string description, const std::string& f,
                              const std::string& g, double lo, double hi, std::size_t x_points,
                              double y_range, std::size_t y_points) {
  ObjectiveFunction base = ObjectiveFunction::parse(f, {}, Box({lo}, {hi}));
  ObjectiveFunction objective = ObjectiveFunction::parse(f, {g}, Box({lo}, {hi}));
  auto p = PerturbationFunction::constraint(base, {Expression::parse(g, 1)});
  return CatalogEntry{
      std::move(name),
      std::move(description),
      std::move(objective),
      line_grid(lo, hi, x_points),
      std::move(p),
      line_grid(-y_range, y_range, y_points),
      affine_pg(1, 2.0, 81),
      quad_pg({0.0, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0}, 1, 2.0, 81, {{0.25, {-0.5}}}),
      affine_pg(1, 4.0, 81),
      quad_pg({0.0, 1.0, 4.0}, 1, 4.0, 33),
      {},
      {}};
}

CatalogEntry classical_gap() {
  auto e = constraint_entry("classical-gap", "f = -x^2 subject to 2x - 1 <= 0 on [0, 1]", "-x1^2",
                            "2*x1 - 1", 0.0, 1.0, 401, 2.0, 801);
  e.expected = {-0.25, -0.5, -0.25, false, true};
  e.notes =
      "Concave objective with an inequality constraint: the classical (affine) dual leaves a gap "
      "of 1/4, the quadratic augmented dual closes it at (a, v) = (1/4, -1/2), where "
      "L(., 1/4, -1/2) is identically -1/4.";
  return e;
}

CatalogEntry double_well() {
  auto e = constraint_entry("double-well", "f = (x^2 - 1)^2 subject to x - 0.5 <= 0 on [-2, 2]",
                            "(x1^2 - 1)^2", "x1 - 0.5", -2.0, 2.0, 401, 3.0, 601);
  e.expected = {0.0, 0.0, 0.0, true, true};
  e.notes = "2-paraconvex objective; V(y) = 0 for y >= -1.5, so y0 = 0 is interior to dom V.";
  return e;
}

CatalogEntry convex_lp() {
  auto e = constraint_entry("convex-lp", "f = x subject to -x <= 0 on [-1, 1]", "x1", "-x1", -1.0,
                            1.0, 401, 2.0, 801);
  e.expected = {0.0, 0.0, 0.0, true, true};
  e.notes = "Linear program; multiplier 1 for the affine class, (a, -1) for the quadratic class.";
  return e;
}

CatalogEntry kernel_line() {
  const Box box = Box::cube(2, -1.0, 1.0);
  const std::vector<std::string> on_line = {"x1 - 1e-9", "-x1 - 1e-9"};
  ObjectiveFunction g = ObjectiveFunction::parse("0", on_line, box);
  ObjectiveFunction h = ObjectiveFunction::parse("sqrt(x1^2 + x2^2)", on_line, box);
  ObjectiveFunction objective = ObjectiveFunction::parse("sqrt(x1^2 + x2^2)", on_line, box);
  const Grid grid = Grid::uniform(box, 11);
  CatalogEntry e{"kernel-line",
                 "minimize the norm over the kernel line {x1 = 0} in R^2 (fenchel split)",
                 std::move(objective),
                 grid,
                 PerturbationFunction::fenchel(std::move(g), std::move(h)),
                 grid,
                 affine_pg(2, 1.0, 5),
                 quad_pg({0.0, 0.5, 1.0}, 2, 1.0, 5),
                 affine_pg(2, 1.0, 5),
                 quad_pg({0.0, 1.0}, 2, 1.0, 5),
                 {0.0, 0.0, 0.0, true, true},
                 "beta = 0; the constant zero functions have the intersection property at level "
                 "0. V is the indicator of {y1 = 0}."};
  return e;
}

CatalogEntry orthogonal_lines() {
  const Box box = Box::cube(4, -1.0, 1.0);
  // C = {x1 + x2 = 0, x3 + x4 = 0}, S = {x2 + x3 = 0, x4 = 0}; C ∩ S = {0}.
  const std::vector<std::string> in_c = {"x1 + x2 - 1e-9", "-x1 - x2 - 1e-9", "x3 + x4 - 1e-9",
                                         "-x3 - x4 - 1e-9"};
  const std::vector<std::string> in_s = {"x2 + x3 - 1e-9", "-x2 - x3 - 1e-9", "x4 - 1e-9",
                                         "-x4 - 1e-9"};
  std::vector<std::string> both = in_c;
  both.insert(both.end(), in_s.begin(), in_s.end());
  ObjectiveFunction f = ObjectiveFunction::parse("0", in_c, box);
  ObjectiveFunction g = ObjectiveFunction::parse("0", in_s, box);
  ObjectiveFunction objective = ObjectiveFunction::parse("0", both, box);
  const Grid grid = Grid::uniform(box, 5);
  CatalogEntry e{"orthogonal-lines",
                 "indicators of two subspaces of R^4 meeting only at the origin",
                 std::move(objective),
                 grid,
                 PerturbationFunction::fenchel(std::move(f), std::move(g)),
                 grid,
                 affine_pg(4, 1.0, 3),
                 quad_pg({0.0, 1.0}, 4, 1.0, 3),
                 affine_pg(4, 1.0, 3),
                 quad_pg({0.0, 1.0}, 4, 1.0, 3),
                 {0.0, std::nullopt, std::nullopt, std::nullopt, std::nullopt},
                 "beta = 0; the constant zero functions witness the intersection property at "
                 "level 0."};
  return e;
}

CatalogEntry dc_kink() {
  ObjectiveFunction f =
      ObjectiveFunction::parse("x1^2 + 1 - 2*abs(x1)", {}, Box({-2.0}, {2.0}));
  CatalogEntry e{"dc-kink",
                 "f = x^2 + 1 - 2|x| on [-2, 2] (downward kink at 0), biconjugate study",
                 std::move(f),
                 line_grid(-2.0, 2.0, 401),
                 std::nullopt,
                 std::nullopt,
                 std::nullopt,
                 std::nullopt,
                 affine_pg(1, 8.0, 33),
                 quad_pg({0.0, 1.0, 3.0, 9.0, 33.0, 99.0}, 1, 8.0, 33),
                 {},
                 "f is not paraconvex; its quadratic biconjugate misses f(0) by 1/(1 + a_max)."};
  return e;
}

}  // namespace

const ParameterGrid& CatalogEntry::dual_pg(DualClass cls) const {
  const auto& pg = cls == DualClass::affine ? dual_pg_affine : dual_pg_quad;
  if (!pg) throw ValidationError("catalog entry '" + name + "' has no dual parameter grid");
  return *pg;
}

const ParameterGrid& CatalogEntry::x_pg(DualClass cls) const {
  return cls == DualClass::affine ? x_pg_affine : x_pg_quad;
}

Lagrangian CatalogEntry::lagrangian(DualClass cls) const {
  if (!perturbation || !y_grid) {
    throw ValidationError("catalog entry '" + name + "' has no perturbation function");
  }
  return Lagrangian(*perturbation, cls, *y_grid);
}

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = {"classical-gap", "kernel-line",
                                                 "orthogonal-lines", "double-well",
                                                 "dc-kink", "convex-lp"};
  return names;
}

CatalogEntry load(std::string_view name) {
  if (name == "classical-gap") return classical_gap();
  if (name == "kernel-line") return kernel_line();
  if (name == "orthogonal-lines") return orthogonal_lines();
  if (name == "double-well") return double_well();
  if (name == "dc-kink") return dc_kink();
  if (name == "convex-lp") return convex_lp();
  std::string known;
  for (const auto& n : catalog_names()) known += (known.empty() ? "" : ", ") + n;
  throw ValidationError("unknown catalog entry '" + std::string(name) + "' (known: " + known + ")");
}

}  // namespace phidual
