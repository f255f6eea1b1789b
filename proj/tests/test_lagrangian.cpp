#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "phidual/catalog.hpp"
#include "phidual/errors.hpp"
#include "phidual/lagrangian.hpp"

using namespace phidual;

namespace {

const Box box({-3.0}, {3.0});
const Grid y_grid = Grid::uniform(box, 601);
const Grid x_grid = Grid::uniform(box, 61);

PerturbationFunction square_with_constraint() {
  return PerturbationFunction::constraint(ObjectiveFunction::parse("x1^2", {}, box),
                                          {Expression::parse("x1 - 1", 1)});
}

DualParameter quad(double a, double v) { return {DualClass::quad_minorant, a, {v}}; }
DualParameter affine(double v) { return {DualClass::affine, 0.0, {v}}; }

const std::vector<double> zero{0.0};
const std::vector<double> two{2.0};

}  // namespace

TEST(Perturbation, AnchorGivesObjective) {
  const auto p = square_with_constraint();
  EXPECT_EQ(p.objective(two), ExtendedValue::pos_inf());
  EXPECT_EQ(p.objective(zero), ExtendedValue(0.0));
  EXPECT_EQ(p(two, std::vector<double>{1.0}), ExtendedValue(4.0));
  EXPECT_EQ(p.constraint_values(two), (std::vector<double>{1.0}));
  EXPECT_THROW((void)p.fenchel_g(), ValidationError);
}

TEST(PsiConjugate, FeasibleVertex) {
  EXPECT_NEAR(psi_conjugate(square_with_constraint(), zero, quad(1.0, 0.0), y_grid).value(), 0.0, 1e-12);
}

TEST(PsiConjugate, BoundaryMaximizer) {
  EXPECT_NEAR(psi_conjugate(square_with_constraint(), two, quad(1.0, 0.0), y_grid).value(), -5.0, 1e-12);
}

TEST(PsiConjugate, FenchelWithPointIndicator) {
  const auto g = ObjectiveFunction::parse("0", {}, box);
  const auto h = ObjectiveFunction::parse("0", {"x1 - 1e-9", "-x1 - 1e-9"}, box);
  const auto p = PerturbationFunction::fenchel(g, h);
  EXPECT_NEAR(psi_conjugate(p, std::vector<double>{1.0}, quad(0.0, 1.0), y_grid).value(), 1.0, 1e-12);
}

TEST(LagrangianEval, QuadraticRoute) {
  const Lagrangian L(square_with_constraint(), DualClass::quad_minorant, y_grid);
  EXPECT_NEAR(L(zero, quad(1.0, 0.0)).value(), 0.0, 1e-12);
  EXPECT_NEAR(L.eval_grid(zero, quad(1.0, 0.0)).value(), 0.0, 1e-12);
  EXPECT_NEAR(lagrangian_eval(L, two, quad(1.0, 0.0)).value(), 5.0, 1e-12);
}

TEST(LagrangianEval, ClassicalMultiplier) {
  const Lagrangian L(square_with_constraint(), DualClass::affine, y_grid);
  EXPECT_DOUBLE_EQ(L(zero, affine(3.0)).value(), -3.0);
  EXPECT_TRUE(L(zero, affine(-1.0)).is_neg_inf());
  EXPECT_EQ(L.psi(affine(3.0))(std::vector<double>{1.0}), -3.0);
}

TEST(LagrangianEval, ZeroCurvatureQuadraticClass) {
  const Lagrangian L(square_with_constraint(), DualClass::quad_minorant, y_grid);
  EXPECT_DOUBLE_EQ(L(zero, quad(0.0, -2.0)).value(), -2.0);
  EXPECT_TRUE(L(zero, quad(0.0, 1.0)).is_neg_inf());
}

TEST(ClosedForm, Examples) {
  const auto f = ObjectiveFunction::parse("x1^2", {}, box);
  const std::vector<Expression> g{Expression::parse("x1 - 1", 1)};
  const std::vector<double> v0{0.0};
  EXPECT_DOUBLE_EQ(augmented_lagrangian_closed_form(f, g, zero, 1.0, v0), 0.0);
  EXPECT_DOUBLE_EQ(augmented_lagrangian_closed_form(f, g, two, 1.0, v0), 5.0);
  EXPECT_THROW((void)augmented_lagrangian_closed_form(f, g, zero, 0.0, v0), ValidationError);
  double prev = -1e300;
  for (double a : {1.0, 10.0, 100.0}) {
    const double val = augmented_lagrangian_closed_form(f, g, two, a, v0);
    EXPECT_GT(val, prev);
    prev = val;
  }
}

TEST(ClosedForm, MultiplierFormAgrees) {
  const auto f = ObjectiveFunction::parse("x1^2", {}, box);
  const std::vector<Expression> g{Expression::parse("x1 - 1", 1)};
  for (double x : {-2.0, 0.0, 0.5, 2.0})
    for (double v : {-3.0, -0.5, 0.0, 1.0}) {
      const std::vector<double> xs{x}, vs{v}, us{-v};
      EXPECT_NEAR(augmented_lagrangian_closed_form(f, g, xs, 0.7, vs),
                  augmented_lagrangian_multiplier_form(f, g, xs, 0.7, us), 1e-12);
    }
}

TEST(ClosedForm, InnerMinimizer) {
  const std::vector<double> gv{-1.0, 0.5}, v{1.0, -4.0};
  EXPECT_EQ(augmented_inner_minimizer(gv, 1.0, v), (std::vector<double>{0.5, 0.5}));
}

TEST(ClosedForm, ClassicalGapLagrangianIsConstant) {
  const auto e = load("classical-gap");
  const auto L = e.lagrangian(DualClass::quad_minorant);
  for (std::size_t i = 0; i < e.x_grid.size(); ++i)
    EXPECT_NEAR(L(e.x_grid.point(i), quad(0.25, -0.5)).value(), -0.25, 1e-12);
}

TEST(ClosedForm, MatchesGridSupremum) {
  // y grid covers g over x_grid and every v/2a used below.
  const Grid wide = Grid::uniform(Box({-5.0}, {5.0}), 1001);
  const Lagrangian L(square_with_constraint(), DualClass::quad_minorant, wide);
  for (std::size_t i = 0; i < x_grid.size(); i += 3)
    for (double a : {0.25, 1.0, 4.0})
      for (double v : {-2.0, 0.0, 1.5}) {
        const auto psi = quad(a, v);
        const auto x = x_grid.point(i);
        EXPECT_NEAR(L(x, psi).value(), L.eval_grid(x, psi).value(), lagrangian_tolerance(wide, psi));
      }
}

TEST(SupOverDual, FeasiblePointRecoversObjective) {
  const auto e = load("classical-gap");
  for (auto cls : {DualClass::affine, DualClass::quad_minorant}) {
    const auto L = e.lagrangian(cls);
    for (double x : {0.0, 0.25, 0.5}) {
      const std::vector<double> xs{x};
      const auto s = sup_over_dual(L, xs, e.dual_pg(cls));
      EXPECT_NEAR(s.value.value(), -x * x, 1e-9);
      EXPECT_FALSE(s.diverging);
    }
  }
}

TEST(SupOverDual, InfeasiblePointExceedsObjective) {
  const auto e = load("classical-gap");
  const auto L = e.lagrangian(DualClass::quad_minorant);
  const std::vector<double> xs{0.75};
  EXPECT_GT(sup_over_dual(L, xs, e.dual_pg(DualClass::quad_minorant)).value.value(), 0.0);
}

TEST(DefaultYGrid, ContainsAnchor) {
  const auto pg = ParameterGrid(ElementaryClass::quad_minorant, {0.0, 0.5, 1.0},
                                Grid::uniform(Box({-1.0}, {1.0}), 5));
  const auto g = default_y_grid(square_with_constraint(), x_grid, pg, 0.05);
  EXPECT_TRUE(g.find(zero).has_value());
  EXPECT_LE(g.box().lower()[0], -4.0);
  EXPECT_GE(g.box().upper()[0], 2.0);
}

TEST(Surface, CsvLayout) {
  const Lagrangian L(square_with_constraint(), DualClass::quad_minorant, y_grid);
  const std::vector<DualParameter> ps{quad(1.0, 0.0), quad(0.5, -1.0)};
  const Grid xs = Grid::uniform(Box({-1.0}, {1.0}), 3);
  std::ostringstream os;
  write_lagrangian_surface_csv(os, L, xs, ps);
  const auto s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "x1,a,v1,L");
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 7);
  EXPECT_EQ(L.surface(xs, ps).size(), 6u);
}
