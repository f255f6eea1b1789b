#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "phidual/catalog.hpp"
#include "phidual/duality.hpp"
#include "phidual/errors.hpp"
#include "phidual/report_io.hpp"

using namespace phidual;

namespace {

bool has_param(const std::vector<DualParameter>& ps, double a, double v) {
  for (const auto& p : ps)
    if (std::abs(p.a - a) < 1e-12 && std::abs(p.v[0] - v) < 1e-12) return true;
  return false;
}

}  // namespace

TEST(PrimalValue, CatalogProblems) {
  const struct {
    const char* name;
    double value;
    double at;
  } cases[] = {{"classical-gap", -0.25, 0.5}, {"convex-lp", 0.0, 0.0}, {"double-well", 0.0, -1.0}};
  for (const auto& c : cases) {
    const auto e = load(c.name);
    for (auto cls : {DualClass::affine, DualClass::quad_minorant}) {
      const auto r = primal_value(e.lagrangian(cls), e.x_grid, e.dual_pg(cls));
      EXPECT_NEAR(r.direct.value(), c.value, 1e-12) << c.name;
      EXPECT_TRUE(r.agree) << c.name;
      ASSERT_TRUE(r.argpoint);
      EXPECT_NEAR((*r.argpoint)[0], c.at, 1e-12) << c.name;
    }
  }
}

TEST(DualValue, ClassicalGap) {
  const auto e = load("classical-gap");
  const auto affine = dual_value(e.lagrangian(DualClass::affine), e.x_grid, e.dual_pg(DualClass::affine));
  EXPECT_NEAR(affine.value.value(), -0.5, 1e-9);
  EXPECT_EQ(affine.dual_function.size(), e.dual_pg(DualClass::affine).size());
  const auto quad = dual_value(e.lagrangian(DualClass::quad_minorant), e.x_grid,
                               e.dual_pg(DualClass::quad_minorant));
  EXPECT_NEAR(quad.value.value(), -0.25, 1e-9);
  EXPECT_TRUE(has_param(quad.argmax, 0.25, -0.5));
}

TEST(DualValue, NeverAbovePrimal) {
  for (const auto& name : catalog_names()) {
    const auto e = load(name);
    if (!e.has_lagrangian()) continue;
    for (auto cls : {DualClass::affine, DualClass::quad_minorant}) {
      const auto L = e.lagrangian(cls);
      const auto p = primal_value(L, e.x_grid, e.dual_pg(cls));
      const auto d = dual_value(L, e.x_grid, e.dual_pg(cls));
      EXPECT_LE(d.value.value(), p.direct.value() + 1e-9) << name;
    }
  }
}

TEST(ValueFunction, ClassicalGapClosedForm) {
  const auto e = load("classical-gap");
  const auto t = value_function(*e.perturbation, e.x_grid, *e.y_grid);
  const auto& g = t.values.grid;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double y = g.point(i)[0];
    const auto v = t.values.at(i);
    if (y < -1.0 - 1e-9) {
      EXPECT_TRUE(v.is_pos_inf()) << y;
    } else if (y > 1.0) {
      EXPECT_DOUBLE_EQ(v.value(), -1.0) << y;
    } else {
      const double x = std::min(1.0, std::floor((1.0 + y) / 2.0 * 400.0 + 1e-6) / 400.0);
      EXPECT_NEAR(v.value(), -x * x, 1e-12) << y;
      EXPECT_NEAR(v.value(), -0.25 * (1 + y) * (1 + y), 0.006) << y;
    }
  }
  EXPECT_DOUBLE_EQ(t.values.at(t.anchor_index).value(), -0.25);
}

TEST(ValueFunction, FenchelTriangle) {
  const Box box({-2.0}, {2.0});
  const auto abs = ObjectiveFunction::parse("abs(x1)", {}, box);
  const auto p = PerturbationFunction::fenchel(abs, abs);
  const Grid g = Grid::uniform(box, 81);
  const auto t = value_function(p, g, g);
  for (std::size_t i = 0; i < g.size(); ++i)
    EXPECT_NEAR(t.values.at(i).value(), std::abs(g.point(i)[0]), 1e-12);
}

TEST(ValueBiconjugate, ClassicalGapByClass) {
  const auto e = load("classical-gap");
  const auto t = value_function(*e.perturbation, e.x_grid, *e.y_grid);
  EXPECT_NEAR(value_biconjugate_at_anchor(t, e.lagrangian(DualClass::affine), e.dual_pg(DualClass::affine))
                  .value(),
              -0.5, 1e-9);
  EXPECT_NEAR(value_biconjugate_at_anchor(t, e.lagrangian(DualClass::quad_minorant),
                                          e.dual_pg(DualClass::quad_minorant))
                  .value(),
              -0.25, 1e-9);
}

TEST(ValueBiconjugate, ConvexProblemMatchesValue) {
  const auto e = load("convex-lp");
  const auto t = value_function(*e.perturbation, e.x_grid, *e.y_grid);
  EXPECT_NEAR(value_biconjugate_at_anchor(t, e.lagrangian(DualClass::affine), e.dual_pg(DualClass::affine))
                  .value(),
              t.values.at(t.anchor_index).value(), 1e-9);
}

TEST(Certify, ClassicalGapQuadratic) {
  const auto e = load("classical-gap");
  const auto r = certify(e.lagrangian(DualClass::quad_minorant), e.x_grid, e.dual_pg(DualClass::quad_minorant));
  EXPECT_TRUE(r.certifications.zero_gap);
  EXPECT_TRUE(r.certifications.strong_duality);
  EXPECT_TRUE(r.certifications.weak_duality_ok);
  EXPECT_LE(r.gap.value(), 1e-6);
  EXPECT_TRUE(has_param(r.dual_argmax, 0.25, -0.5));
  EXPECT_TRUE(has_param(r.subdifferential_at_anchor, 0.25, -0.5));
  EXPECT_EQ(r.argmax_matches_subdifferential, Verdict::holds);
  EXPECT_TRUE(r.dual_matches_v_biconj);
  EXPECT_TRUE(r.zero_gap_matches_value_function);
}

TEST(Certify, ClassicalGapAffine) {
  const auto e = load("classical-gap");
  const auto r = certify(e.lagrangian(DualClass::affine), e.x_grid, e.dual_pg(DualClass::affine));
  EXPECT_FALSE(r.certifications.zero_gap);
  EXPECT_NEAR(r.gap.value(), 0.25, 0.02);
  EXPECT_FALSE(r.certifications.strong_duality);
  EXPECT_TRUE(r.zero_gap_matches_value_function);
}

TEST(Certify, DoubleWellParaconvexRoute) {
  const auto e = load("double-well");
  const auto r = certify(e.lagrangian(DualClass::quad_minorant), e.x_grid, e.dual_pg(DualClass::quad_minorant));
  EXPECT_TRUE(r.certifications.v_paraconvex);
  EXPECT_TRUE(r.anchor_interior);
  EXPECT_EQ(r.paraconvex_consequence, Verdict::holds);
  EXPECT_TRUE(r.certifications.zero_gap);
  EXPECT_TRUE(r.certifications.strong_duality);
  EXPECT_FALSE(r.dual_argmax.empty());
}

TEST(Certify, JsonIsDeterministic) {
  const auto e = load("convex-lp");
  const auto L = e.lagrangian(DualClass::affine);
  const auto a = to_json(certify(L, e.x_grid, e.dual_pg(DualClass::affine)));
  const auto b = to_json(certify(L, e.x_grid, e.dual_pg(DualClass::affine)));
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("\"primal_value\""), std::string::npos);
}

TEST(DualParameters, ClassMismatchRejected) {
  const auto e = load("classical-gap");
  EXPECT_THROW((void)dual_parameters(e.lagrangian(DualClass::affine), e.dual_pg(DualClass::quad_minorant)),
               ValidationError);
}

TEST(Catalog, LoadsEveryEntry) {
  EXPECT_EQ(catalog_names().size(), 6u);
  for (const auto& name : catalog_names()) {
    const auto e = load(name);
    EXPECT_EQ(e.name, name);
    EXPECT_FALSE(e.description.empty());
  }
  EXPECT_FALSE(load("dc-kink").has_lagrangian());
  EXPECT_TRUE(load("kernel-line").has_lagrangian());
}

TEST(Catalog, UnknownNameListsKnown) {
  try {
    (void)load("nope");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("classical-gap"), std::string::npos);
  }
}

TEST(Catalog, ExpectedValuesReproduced) {
  for (const auto& name : catalog_names()) {
    const auto e = load(name);
    if (!e.has_lagrangian()) continue;
    for (auto cls : {DualClass::affine, DualClass::quad_minorant}) {
      const auto r = certify(e.lagrangian(cls), e.x_grid, e.dual_pg(cls));
      if (e.expected.primal) EXPECT_NEAR(r.primal_value.value(), *e.expected.primal, r.tol_gap) << name;
      const auto& dual = cls == DualClass::affine ? e.expected.dual_affine : e.expected.dual_quad;
      if (dual) EXPECT_NEAR(r.dual_value.value(), *dual, r.tol_gap) << name;
      const auto& zero = cls == DualClass::affine ? e.expected.zero_gap_affine : e.expected.zero_gap_quad;
      if (zero) EXPECT_EQ(r.certifications.zero_gap, *zero) << name;
    }
  }
}

TEST(ReportIo, FormatNumber) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(ExtendedValue::pos_inf()), "+inf");
  EXPECT_EQ(format_number(ExtendedValue::neg_inf()), "-inf");
  EXPECT_EQ(format_number(1e-9), "1e-09");
}
