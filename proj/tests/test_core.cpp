#include <gtest/gtest.h>

#include <cmath>

#include "phidual/elementary.hpp"
#include "phidual/errors.hpp"
#include "phidual/expression.hpp"
#include "phidual/extended_value.hpp"
#include "phidual/objective.hpp"

using namespace phidual;

namespace {
double eval(const std::string& src, std::vector<double> x) {
  return Expression::parse(src, x.size())(x);
}
}  // namespace

TEST(Expression, EvaluatesPolynomial) { EXPECT_DOUBLE_EQ(eval("x1^2 - 1", {2.0}), 3.0); }

TEST(Expression, EvaluatesMinOfBranches) {
  EXPECT_DOUBLE_EQ(eval("min((x1+1)^2,(x1-1)^2)", {0.0}), 1.0);
}

TEST(Expression, EvaluatesProductOfAbs) { EXPECT_DOUBLE_EQ(eval("abs(x1)*x2", {-2.0, 3.0}), 6.0); }

TEST(Expression, FunctionsAndPrecedence) {
  EXPECT_DOUBLE_EQ(eval("-x1^2", {3.0}), -9.0);
  EXPECT_DOUBLE_EQ(eval("2*x1 - 1", {0.25}), -0.5);
  EXPECT_DOUBLE_EQ(eval("max(x1, x2, 4)", {1.0, 2.0}), 4.0);
  EXPECT_DOUBLE_EQ(eval("x1^-2", {2.0}), 0.25);
  EXPECT_DOUBLE_EQ(eval("sqrt(x1^2 + x2^2)", {3.0, 4.0}), 5.0);
  EXPECT_NEAR(eval("exp(0) + sin(0) + cos(0)", {0.0}), 2.0, 1e-15);
  EXPECT_DOUBLE_EQ(eval("1e-9", {0.0}), 1e-9);
}

TEST(Expression, ParseErrorsCarryOffset) {
  try {
    (void)Expression::parse("x1 + * 2", 1);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 5u);
  }
  EXPECT_THROW((void)Expression::parse("x3", 2), ParseError);
  EXPECT_THROW((void)Expression::parse("foo(x1)", 1), ParseError);
  EXPECT_THROW((void)Expression::parse("abs(x1, x1)", 1), ParseError);
  EXPECT_THROW((void)Expression::parse("min(x1)", 1), ParseError);
  EXPECT_THROW((void)Expression::parse("x1^x1", 1), ParseError);
  EXPECT_THROW((void)Expression::parse("(x1", 1), ParseError);
  EXPECT_THROW((void)Expression::parse("", 1), ParseError);
}

TEST(Expression, CanonicalPrintRoundTrips) {
  for (const char* src : {"x1^2 - 1", "-x1^2 + 2*x2", "min(x1, -x2, 3) / (1 + abs(x1))",
                          "sqrt(x1^2 + x2^2)", "(x1^2 - 1)^2", "-(-x1)"}) {
    const auto e = Expression::parse(src, 2);
    const auto again = Expression::parse(e.to_string(), 2);
    EXPECT_EQ(e, again) << src;
    EXPECT_EQ(again.to_string(), e.to_string());
  }
}

TEST(Expression, FreeVariablesAndConstant) {
  EXPECT_EQ(Expression::parse("x3 + x1*x3", 3).free_variables(), (std::vector<std::size_t>{0, 2}));
  const auto c = Expression::constant(-2.5, 1);
  EXPECT_DOUBLE_EQ(c(std::vector<double>{7.0}), -2.5);
  EXPECT_TRUE(c.free_variables().empty());
}

TEST(ExtendedValue, ArithmeticAndOrder) {
  const auto inf = ExtendedValue::pos_inf();
  const auto ninf = ExtendedValue::neg_inf();
  EXPECT_EQ(ExtendedValue(1.0) + inf, inf);
  EXPECT_EQ(ExtendedValue(1.0) - inf, ninf);
  EXPECT_THROW((void)(inf + ninf), NumericalError);
  EXPECT_THROW((void)ExtendedValue(std::nan("")), NumericalError);
  EXPECT_LT(ninf, ExtendedValue(-1e300));
  EXPECT_LT(ExtendedValue(1e300), inf);
  EXPECT_EQ(inf.scaled(0.0), ExtendedValue(0.0));
  EXPECT_TRUE(ExtendedValue(std::numeric_limits<double>::infinity()).is_pos_inf());
}

TEST(Grid, EndpointsExactAndScanOrder) {
  const Grid g(Box({-1.0, 0.0}, {1.0, 2.0}), {3, 5});
  EXPECT_EQ(g.size(), 15u);
  EXPECT_DOUBLE_EQ(g.coordinate(0, 2), 1.0);
  EXPECT_DOUBLE_EQ(g.coordinate(1, 4), 2.0);
  EXPECT_EQ(g.point_copy(1), (Point{-1.0, 0.5}));
  EXPECT_EQ(g.point_copy(5), (Point{0.0, 0.0}));
  EXPECT_EQ(g.flat_index(g.multi_index(11)), 11u);
  EXPECT_EQ(g.find(std::vector<double>{0.0, 1.5}), std::optional<std::size_t>(8));
  EXPECT_FALSE(g.find(std::vector<double>{0.3, 1.5}).has_value());
  EXPECT_THROW(Grid(Box({0.0}, {1.0}), {1}), ValidationError);
  EXPECT_THROW(Box({1.0}, {0.0}), ValidationError);
}

TEST(GridExtremum, SquareMinimumAtOrigin) {
  const auto f = ObjectiveFunction::parse("x1^2", {}, Box({-2.0}, {2.0}));
  const auto r = grid_extremum(f, Grid::uniform(f.domain(), 401), ExtremumMode::min);
  EXPECT_EQ(r.value, ExtendedValue(0.0));
  ASSERT_TRUE(r.argpoint);
  EXPECT_DOUBLE_EQ((*r.argpoint)[0], 0.0);
}

TEST(GridExtremum, InfeasibleEverywhereIsPlusInfinity) {
  const auto f = ObjectiveFunction::parse("x1^2", {"x1 - 1"}, Box({2.0}, {3.0}));
  const auto r = grid_extremum(f, Grid::uniform(f.domain(), 11), ExtremumMode::min);
  EXPECT_TRUE(r.value.is_pos_inf());
  EXPECT_FALSE(r.argpoint);
}

TEST(GridExtremum, ConcaveParabolaMaximum) {
  const auto f = ObjectiveFunction::parse("x1 - x1^2", {}, Box({-2.0}, {2.0}));
  const auto r = grid_extremum(f, Grid::uniform(f.domain(), 4001), ExtremumMode::max);
  EXPECT_NEAR(r.value.value(), 0.25, 1e-12);
  EXPECT_NEAR((*r.argpoint)[0], 0.5, 1e-12);
}

TEST(GridExtremum, TiesGoToFirstScanIndex) {
  const auto f = ObjectiveFunction::parse("(x1^2 - 1)^2", {}, Box({-2.0}, {2.0}));
  const auto r = grid_extremum(f, Grid::uniform(f.domain(), 401), ExtremumMode::min);
  EXPECT_DOUBLE_EQ((*r.argpoint)[0], -1.0);
}

TEST(Objective, ConstraintsAndSampling) {
  const auto f = ObjectiveFunction::parse("x1", {"-x1"}, Box({-1.0}, {1.0}));
  EXPECT_TRUE(f(std::vector<double>{-0.5}).is_pos_inf());
  EXPECT_EQ(f(std::vector<double>{0.5}), ExtendedValue(0.5));
  EXPECT_THROW((void)f.sample(Grid::uniform(Box({-2.0}, {1.0}), 5)), ValidationError);
  const auto g = ObjectiveFunction::parse("sqrt(x1)", {}, Box({-1.0}, {1.0}));
  EXPECT_THROW((void)g(std::vector<double>{-1.0}), NumericalError);
}

TEST(Elementary, EvaluationRules) {
  const std::vector<double> x{1.0, 2.0};
  EXPECT_DOUBLE_EQ(ElementaryFunction::affine({1.0, -1.0}, 3.0)(x), 2.0);
  EXPECT_DOUBLE_EQ(ElementaryFunction::quad_minorant(0.5, {1.0, 0.0}, 0.0)(x), 1.0 - 2.5);
  EXPECT_DOUBLE_EQ(ElementaryFunction::quad_majorant(0.5, {1.0, 0.0}, 0.0)(x), 1.0 + 2.5);
  EXPECT_THROW((void)ElementaryFunction::quad_minorant(-1.0, {0.0}, 0.0), ValidationError);
}

TEST(ParameterGrid, SeedsAppendedOnce) {
  const ParameterGrid pg(ElementaryClass::quad_minorant, {0.0, 1.0},
                         Grid::uniform(Box({-1.0}, {1.0}), 3), {{0.25, {-0.5}}, {1.0, {0.0}}});
  EXPECT_EQ(pg.size(), 7u);
  EXPECT_EQ(pg[6], (ParameterPoint{0.25, {-0.5}}));
  EXPECT_DOUBLE_EQ(pg.a_max(), 1.0);
  EXPECT_EQ(pg.truncated(0.5).size(), 4u);
}
