#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "phidual/catalog.hpp"
#include "phidual/conjugation.hpp"
#include "phidual/expression.hpp"
#include "phidual/minimax.hpp"
#include "phidual/subdifferential.hpp"

using namespace phidual;

namespace {

const Box box({-2.0}, {2.0});
const Grid grid = Grid::uniform(box, 201);

// Random quartic c0 + c1 x + ... + c4 x^4 with c4 >= 0.
GridFunction random_poly(std::mt19937& rng) {
  std::uniform_real_distribution<double> c(-2.0, 2.0);
  const double c0 = c(rng), c1 = c(rng), c2 = c(rng), c3 = c(rng), c4 = std::abs(c(rng));
  std::vector<ExtendedValue> v;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.point(i)[0];
    v.emplace_back(c0 + x * (c1 + x * (c2 + x * (c3 + x * c4))));
  }
  return GridFunction(grid, std::move(v));
}

ElementaryFunction random_phi(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> a(0.0, 4.0);
  if (rng() % 2) return ElementaryFunction::affine({u(rng)}, u(rng));
  return ElementaryFunction::quad_minorant(a(rng), {u(rng)}, u(rng));
}

std::string random_expr(std::mt19937& rng, int depth) {
  static const char* ops[] = {" + ", " - ", " * "};
  if (depth == 0 || rng() % 4 == 0) {
    switch (rng() % 3) {
      case 0: return "x" + std::to_string(1 + rng() % 2);
      case 1: return std::to_string(rng() % 10) + "." + std::to_string(rng() % 100);
      default: return "x1^" + std::to_string(1 + rng() % 3);
    }
  }
  switch (rng() % 5) {
    case 0: return "abs(" + random_expr(rng, depth - 1) + ")";
    case 1: return "-(" + random_expr(rng, depth - 1) + ")";
    case 2: return "max(" + random_expr(rng, depth - 1) + ", " + random_expr(rng, depth - 1) + ")";
    default:
      return "(" + random_expr(rng, depth - 1) + ops[rng() % 3] + random_expr(rng, depth - 1) + ")";
  }
}

}  // namespace

TEST(Property, FenchelYoungNonnegative) {
  std::mt19937 rng(11);
  for (int k = 0; k < 200; ++k) {
    const auto f = random_poly(rng);
    const auto phi = random_phi(rng);
    const std::size_t i = rng() % grid.size();
    EXPECT_GE(young_residual(f, phi, grid.point(i)).value(), -1e-12);
  }
}

TEST(Property, ConjugateIsAntitone) {
  std::mt19937 rng(12);
  for (int k = 0; k < 100; ++k) {
    const auto f = random_poly(rng);
    auto g = f;
    for (auto& v : g.values) v = v + ExtendedValue(std::uniform_real_distribution<double>(0.0, 1.0)(rng));
    const auto phi = random_phi(rng);
    EXPECT_GE(conjugate(f, phi).value(), conjugate(g, phi).value());
  }
}

TEST(Property, BiconjugateBelowFunctionAndGrowsWithClass) {
  std::mt19937 rng(13);
  const ParameterGrid full(ElementaryClass::quad_minorant, {0.0, 0.5, 1.0, 2.0, 4.0},
                           Grid::uniform(Box({-8.0}, {8.0}), 65));
  const auto coarse = full.truncated(1.0);
  for (int k = 0; k < 20; ++k) {
    const auto f = random_poly(rng);
    const auto big = biconjugate_values(f, full);
    const auto small = biconjugate_values(f, coarse);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_LE(big[i].value(), f.at(i).value() + 1e-9);
      EXPECT_LE(small[i].value(), big[i].value() + 1e-12);
    }
  }
}

TEST(Property, ParseRoundTrip) {
  std::mt19937 rng(14);
  for (int k = 0; k < 300; ++k) {
    const auto src = random_expr(rng, 4);
    const auto e = Expression::parse(src, 2);
    const auto back = Expression::parse(e.to_string(), 2);
    EXPECT_EQ(e, back) << src;
    const std::vector<double> x{0.3 * (k % 7) - 1.0, 0.25 * (k % 5)};
    EXPECT_DOUBLE_EQ(e(x), back(x)) << src;
  }
}

TEST(Property, LagrangianConcaveInDualParameter) {
  std::mt19937 rng(15);
  std::uniform_real_distribution<double> a(0.0, 4.0), v(-2.0, 2.0);
  for (const char* name : {"classical-gap", "double-well"}) {
    const auto e = load(name);
    const auto L = e.lagrangian(DualClass::quad_minorant);
    for (int k = 0; k < 200; ++k) {
      const auto x = e.x_grid.point(rng() % e.x_grid.size());
      const DualParameter p{DualClass::quad_minorant, a(rng), {v(rng)}};
      const DualParameter q{DualClass::quad_minorant, a(rng), {v(rng)}};
      const DualParameter m{DualClass::quad_minorant, 0.5 * (p.a + q.a), {0.5 * (p.v[0] + q.v[0])}};
      const auto lp = L(x, p), lq = L(x, q), lm = L(x, m);
      if (!lp.is_finite() || !lq.is_finite()) continue;
      EXPECT_GE(lm.value(), 0.5 * (lp.value() + lq.value()) - 1e-9) << name;
    }
  }
}

TEST(Property, EpsilonSubdifferentialMonotone) {
  std::mt19937 rng(16);
  const ParameterGrid pg(ElementaryClass::quad_minorant, {0.0, 1.0, 4.0},
                         Grid::uniform(Box({-4.0}, {4.0}), 33));
  for (int k = 0; k < 20; ++k) {
    const auto f = random_poly(rng);
    const auto x = grid.point(rng() % grid.size());
    const auto small = estimate_subdifferential(f, x, 0.0, pg);
    const auto big = estimate_subdifferential(f, x, 0.5, pg);
    EXPECT_GE(big.members.size(), small.members.size());
    for (const auto& m : small.members)
      EXPECT_NE(std::find(big.members.begin(), big.members.end(), m), big.members.end());
  }
}

TEST(Property, IntersectionFormsAgreeOnAffinePairs) {
  std::mt19937 rng(17);
  const double slopes[] = {-4.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 4.0};
  const Grid g = Grid::uniform(Box({-2.0}, {2.0}), 129);
  std::uniform_int_distribution<int> off(-8, 8);
  int holds = 0;
  for (int k = 0; k < 200; ++k) {
    const auto p1 = ElementaryFunction::affine({slopes[rng() % 8]}, 0.25 * off(rng));
    const auto p2 = ElementaryFunction::affine({slopes[rng() % 8]}, 0.25 * off(rng));
    const IntersectionQuery q{p1, p2, 0.25 * off(rng)};
    const bool lsc = intersection_lsc(q, g).holds;
    EXPECT_EQ(lsc, intersection_general(q, g).holds) << k;
    holds += lsc;
  }
  EXPECT_GT(holds, 0);
  EXPECT_LT(holds, 200);
}
