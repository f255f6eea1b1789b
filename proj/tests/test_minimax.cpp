#include <gtest/gtest.h>

#include "phidual/catalog.hpp"
#include "phidual/duality.hpp"
#include "phidual/errors.hpp"
#include "phidual/minimax.hpp"

using namespace phidual;

namespace {

const Grid& grid() {
  static const Grid g = Grid::uniform(Box({-2.0}, {2.0}), 129);
  return g;
}

IntersectionQuery query(ElementaryFunction a, ElementaryFunction b, double alpha) {
  return IntersectionQuery{std::move(a), std::move(b), alpha};
}

const auto up = ElementaryFunction::affine({1.0}, 0.0);
const auto down = ElementaryFunction::affine({-1.0}, 0.0);

}  // namespace

TEST(IntersectionGeneral, OpposingLinesHold) {
  EXPECT_TRUE(intersection_general(query(up, down, 0.0), grid()).holds);
}

TEST(IntersectionGeneral, EqualConstantsBelowLevelFail) {
  const auto c = ElementaryFunction::constant(1, -1.0);
  const auto v = intersection_general(query(c, c, 0.0), grid());
  EXPECT_FALSE(v.holds);
  ASSERT_TRUE(v.violating_t);
  EXPECT_DOUBLE_EQ(*v.violating_t, 0.0);
}

TEST(IntersectionGeneral, EmptyFirstSublevelHolds) {
  const auto c = ElementaryFunction::constant(1, 0.5);
  EXPECT_TRUE(intersection_general(query(c, ElementaryFunction::affine({3.0}, -1.0), 0.5), grid()).holds);
  EXPECT_TRUE(intersection_general(query(ElementaryFunction::quad_majorant(1.0, {0.0}, -3.0), c, 0.5),
                                   grid())
                  .holds);
}

TEST(IntersectionLsc, OpposingLinesHold) {
  const auto v = intersection_lsc(query(up, down, 0.0), grid());
  EXPECT_TRUE(v.holds);
  EXPECT_EQ(v.form_used, IntersectionForm::lsc_sublevel);
}

TEST(IntersectionLsc, IdenticalCapsFailOutsideUnitBall) {
  const auto cap = ElementaryFunction::quad_minorant(1.0, {0.0}, 1.0);
  const auto v = intersection_lsc(query(cap, cap, 0.0), grid());
  EXPECT_FALSE(v.holds);
  ASSERT_TRUE(v.violating_point);
  EXPECT_GT(std::abs((*v.violating_point)[0]), 1.0);
}

TEST(IntersectionLsc, MajorantRejected) {
  EXPECT_THROW((void)intersection_lsc(query(ElementaryFunction::quad_majorant(1.0, {0.0}, 0.0), up, 0.0),
                                      grid()),
               ValidationError);
}

TEST(AffineAlgebraic, CancellingSlopes) {
  const std::vector<double> z1{1.0}, z2{-1.0};
  const auto r = intersection_affine_algebraic(z1, 0.0, z2, 0.0, 0.0, 0.1);
  EXPECT_TRUE(r.holds);
  ASSERT_TRUE(r.t0);
  EXPECT_NEAR(*r.t0, 0.5, 1e-12);
}

TEST(AffineAlgebraic, EqualNonzeroSlopesFail) {
  const std::vector<double> z{1.0};
  EXPECT_FALSE(intersection_affine_algebraic(z, 0.0, z, 0.0, 0.0, 0.1).holds);
}

TEST(AffineAlgebraic, ConstantAtOptimumUsesFirst) {
  const std::vector<double> z1{0.0}, z2{3.0};
  const auto r = intersection_affine_algebraic(z1, -2.0, z2, 5.0, -2.0, 1e-9);
  EXPECT_TRUE(r.holds);
  ASSERT_TRUE(r.t0);
  EXPECT_DOUBLE_EQ(*r.t0, 1.0);
}

TEST(WitnessSearch, ClassicalGapAffineExhausts) {
  const auto e = load("classical-gap");
  const auto L = e.lagrangian(DualClass::affine);
  WitnessSearchOptions opts;
  opts.max_members_per_dual = 128;
  const auto r = search_intersection_witness(L, -0.35, dual_parameters(L, e.dual_pg(DualClass::affine)),
                                             e.x_pg(DualClass::affine), e.x_grid, opts);
  EXPECT_FALSE(r.witness);
  EXPECT_FALSE(r.budget_hit);
  EXPECT_GT(r.pairs_checked, 0u);
}

TEST(WitnessSearch, ClassicalGapFoundBelowDualValue) {
  const auto e = load("classical-gap");
  const auto L = e.lagrangian(DualClass::affine);
  WitnessSearchOptions opts;
  opts.max_members_per_dual = 128;
  const auto r = search_intersection_witness(L, -0.6, dual_parameters(L, e.dual_pg(DualClass::affine)),
                                             e.x_pg(DualClass::affine), e.x_grid, opts);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->form_used, IntersectionForm::lsc_sublevel);
  const auto v = intersection_lsc(query(r.witness->phi1, r.witness->phi2, -0.6), e.x_grid);
  EXPECT_TRUE(v.holds);
}

TEST(WitnessSearch, QuadraticDualReachesPrimalLevel) {
  const auto e = load("classical-gap");
  const auto L = e.lagrangian(DualClass::quad_minorant);
  WitnessSearchOptions opts;
  opts.max_members_per_dual = 128;
  const auto r = search_intersection_witness(
      L, -0.26, dual_parameters(L, e.dual_pg(DualClass::quad_minorant)),
      e.x_pg(DualClass::quad_minorant), e.x_grid, opts);
  EXPECT_TRUE(r.witness);
}

TEST(WitnessSearch, KernelLineAtLevelZero) {
  const auto e = load("kernel-line");
  const auto L = e.lagrangian(DualClass::affine);
  const auto r = search_intersection_witness(L, 0.0, dual_parameters(L, e.dual_pg(DualClass::affine)),
                                             e.x_pg(DualClass::affine), e.x_grid);
  ASSERT_TRUE(r.witness);
  EXPECT_NEAR(r.witness->phi1.offset(), 0.0, 1e-9);
}
