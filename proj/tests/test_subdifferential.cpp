#include <gtest/gtest.h>

#include <algorithm>

#include "phidual/errors.hpp"
#include "phidual/subdifferential.hpp"

using namespace phidual;

namespace {

ObjectiveFunction fn(const std::string& src) {
  return ObjectiveFunction::parse(src, {}, Box({-2.0}, {2.0}));
}

const Grid& grid() {
  static const Grid g = Grid::uniform(Box({-2.0}, {2.0}), 401);
  return g;
}

ParameterGrid quad(std::vector<double> a) {
  return ParameterGrid(ElementaryClass::quad_minorant, std::move(a),
                       Grid::uniform(Box({-4.0}, {4.0}), 81));
}

bool contains(const SubdifferentialSample& s, double a, double v) {
  return std::any_of(s.members.begin(), s.members.end(), [&](const LscSubgradient& m) {
    return std::abs(m.a - a) < 1e-12 && std::abs(m.v[0] - v) < 1e-12;
  });
}

const std::vector<double> origin{0.0};

}  // namespace

TEST(IsSubgradient, TangentLineAccepted) {
  const auto r = is_subgradient(fn("x1^2"), ElementaryFunction::affine({2.0}, 7.0),
                                std::vector<double>{1.0}, 0.0, grid());
  EXPECT_TRUE(r.accepted);
}

TEST(IsSubgradient, QuadraticSubgradientOfDoubleWell) {
  const auto r = is_subgradient(fn("(x1^2 - 1)^2"), ElementaryFunction::quad_minorant(2.0, {0.0}, 0.0),
                                origin, 0.0, grid());
  EXPECT_TRUE(r.accepted);
  EXPECT_NEAR(r.min_slack, 0.0, 1e-12);
}

TEST(IsSubgradient, SteepLineThroughMinimumRejected) {
  const auto r = is_subgradient(fn("x1^2"), ElementaryFunction::affine({2.0}, 0.0), origin, 0.0, grid());
  EXPECT_FALSE(r.accepted);
  EXPECT_NEAR(r.min_slack, -1.0, 1e-12);
  EXPECT_DOUBLE_EQ(r.worst_point[0], 1.0);
}

TEST(IsSubgradient, EpsilonRelaxes) {
  const auto phi = ElementaryFunction::affine({2.0}, 0.0);
  EXPECT_TRUE(is_subgradient(fn("x1^2"), phi, origin, 1.0, grid()).accepted);
  EXPECT_FALSE(is_subgradient(fn("x1^2"), phi, origin, 0.99, grid()).accepted);
}

TEST(IsSubgradient, OffGridBaseRejected) {
  EXPECT_THROW((void)is_subgradient(fn("x1^2"), ElementaryFunction::affine({0.0}, 0.0),
                                    std::vector<double>{0.003}, 0.0, grid()),
               ValidationError);
}

TEST(EstimateSubdifferential, SquareAtMinimumContainsZero) {
  const auto s = estimate_subdifferential(fn("x1^2"), origin, 0.0, quad({0.0, 1.0}), grid());
  EXPECT_TRUE(contains(s, 0.0, 0.0));
  EXPECT_FALSE(contains(s, 0.0, 0.5));
}

TEST(EstimateSubdifferential, DoubleWellNeedsCurvature) {
  const auto s = estimate_subdifferential(fn("(x1^2 - 1)^2"), origin, 0.0, quad({0.0, 1.0, 2.0, 4.0}),
                                          grid());
  EXPECT_TRUE(contains(s, 2.0, 0.0));
  EXPECT_FALSE(contains(s, 0.0, 0.0));
}

TEST(EstimateSubdifferential, AbsoluteValueAtKink) {
  const auto s = estimate_subdifferential(fn("abs(x1)"), origin, 0.0, quad({0.0}), grid());
  for (int k = -10; k <= 10; ++k) EXPECT_TRUE(contains(s, 0.0, k * 0.1)) << k;
  EXPECT_FALSE(contains(s, 0.0, 1.1));
  EXPECT_EQ(s.members.size(), s.slacks.size());
}

TEST(ZeroSubgradient, CommonMinimizer) {
  const auto r = zero_subgradient_condition(fn("x1^2"), fn("x1^2"), origin, origin, quad({0.0, 1.0}),
                                            grid());
  EXPECT_EQ(r.verdict, Verdict::holds);
  ASSERT_TRUE(r.p);
  EXPECT_NEAR(r.p->v[0], 0.0, 1e-12);
}

TEST(ZeroSubgradient, OpposingGradientsAtMidpoint) {
  const std::vector<double> mid{0.5};
  const auto r = zero_subgradient_condition(fn("x1^2"), fn("(x1 - 1)^2"), mid, mid, quad({0.0, 1.0}),
                                            grid());
  EXPECT_EQ(r.verdict, Verdict::holds);
  EXPECT_LE(r.residual, 1e-6);
}

TEST(ZeroSubgradient, SameSignGradientsFail) {
  const std::vector<double> one{1.0};
  const auto r = zero_subgradient_condition(fn("x1^2 + 1"), fn("x1^2 - 5"), one, one, quad({0.0, 1.0}),
                                            grid());
  EXPECT_EQ(r.verdict, Verdict::fails);
  EXPECT_GT(r.f_members, 0u);
  EXPECT_GT(r.h_members, 0u);
}

TEST(ZeroSubgradient, EmptySampleIsUndetermined) {
  const auto r = zero_subgradient_condition(fn("x1^2 + 1 - 2*abs(x1)"), fn("x1^2"), origin, origin,
                                            quad({0.0, 1.0}), grid());
  EXPECT_EQ(r.verdict, Verdict::undetermined);
}

TEST(Paraconvexity, DoubleWellModulusTwo) {
  const std::vector<double> cands{0.5, 1.0, 1.5, 2.0, 4.0};
  const auto r = paraconvexity_modulus(fn("(x1^2 - 1)^2"), grid(), cands);
  ASSERT_TRUE(r.modulus);
  EXPECT_DOUBLE_EQ(*r.modulus, 2.0);
  EXPECT_TRUE(r.cross_check_ok);
}

TEST(Paraconvexity, ConvexTakesSmallestCandidate) {
  const std::vector<double> cands{0.1, 1.0};
  const auto r = paraconvexity_modulus(fn("x1^2"), grid(), cands);
  ASSERT_TRUE(r.modulus);
  EXPECT_DOUBLE_EQ(*r.modulus, 0.1);
}

TEST(Paraconvexity, DownwardKinkRejectsAll) {
  const std::vector<double> cands{0.5, 1.0, 2.0, 4.0, 16.0};
  const auto r = paraconvexity_modulus(fn("x1^2 + 1 - 2*abs(x1)"), grid(), cands);
  EXPECT_FALSE(r.modulus);
  EXPECT_TRUE(r.worst_pair);
  EXPECT_GT(r.required_midpoint, 16.0);
}
