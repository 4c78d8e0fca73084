#include "qmc/dynamics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace qmc {
namespace {

double line2_ratio(double beta) { return 1.0 / std::sqrt(*recursion_coeffs(beta).d); }

TEST(Dynamics, GBeta) {
  const auto rc = recursion_coeffs(0.5);
  EXPECT_EQ(g_beta(0.0, rc), 0.0);
  const double t = line2_ratio(0.5);
  EXPECT_NEAR(g_beta(t, rc), t, 1e-14);
  double prev = g_beta(0.0, rc);
  for (int i = 1; i <= 1000; ++i) {
    const double cur = g_beta(i * 1e-3, rc);
    EXPECT_GT(cur, prev);
    prev = cur;
  }
}

TEST(Dynamics, InvertRatio) {
  const auto rc = recursion_coeffs(0.5);
  EXPECT_EQ(invert_ratio(0.0, rc), std::vector<double>{0.0});
  const double t = line2_ratio(0.5);
  const auto roots = invert_ratio(t, rc);
  ASSERT_EQ(roots.size(), 1U);
  EXPECT_NEAR(roots[0], t, 1e-14);
  EXPECT_TRUE(invert_ratio(g_beta(1.0, rc) + 1e-6, rc).empty());
  for (double r : {1e-6, 0.05, 0.2, 0.4}) {
    const auto rr = invert_ratio(r, rc);
    ASSERT_EQ(rr.size(), 1U) << r;
    EXPECT_NEAR(g_beta(rr[0], rc), r, 1e-14);
  }
}

TEST(Dynamics, InvertRatioSmallBeta) {
  // A1 is O(beta^3) here; the polish has to recover the root.
  const auto rc = recursion_coeffs(1e-3);
  const auto rr = invert_ratio(1e-4, rc);
  ASSERT_FALSE(rr.empty());
  EXPECT_NEAR(g_beta(rr.front(), rc), 1e-4, 1e-16);
}

TEST(Dynamics, StepFixedPoints) {
  const double beta = 0.5;
  const auto rc = recursion_coeffs(beta);
  const DynPoint free{1.0 / std::pow(std::cosh(beta), 3), 0.0};
  const auto s1 = step(free, rc);
  ASSERT_TRUE(s1.ok());
  EXPECT_NEAR(s1.point.x, free.x, 1e-15);
  EXPECT_EQ(s1.point.y, 0.0);

  const DynPoint g{std::sqrt(rc.gamma0_squared()), std::sqrt(rc.gamma1_squared())};
  const auto s2 = step(g, rc);
  ASSERT_TRUE(s2.ok());
  EXPECT_NEAR(s2.point.x, g.x, 1e-11);
  EXPECT_NEAR(s2.point.y, g.y, 1e-11);
}

TEST(Dynamics, StepOnDiagonalAxis) {
  const double beta = 1.2, c3 = std::pow(std::cosh(beta), 3);
  const auto s = step({0.9, 0.0}, recursion_coeffs(beta));
  ASSERT_TRUE(s.ok());
  EXPECT_NEAR(s.point.x * c3, std::cbrt(0.9 * c3), 1e-14);
  EXPECT_EQ(s.point.y, 0.0);
}

TEST(Dynamics, StepResidualAndInvariantLine) {
  const double beta = 0.7;
  const auto rc = recursion_coeffs(beta);
  const DynPoint p{0.6, 0.6 * 0.5 * line2_ratio(beta)};
  const auto s = step(p, rc);
  ASSERT_TRUE(s.ok());
  EXPECT_LT(forward_residual(s.point, p, rc), 1e-11);
  EXPECT_NEAR(g_beta(s.point.y / s.point.x, rc), p.y / p.x, 1e-11);

  const double t = line2_ratio(beta);
  const auto on = step({0.6, 0.6 * t}, rc);
  ASSERT_TRUE(on.ok());
  EXPECT_NEAR(on.point.y / on.point.x, t, 1e-11);
}

TEST(Dynamics, StepOutsideDomain) {
  const auto rc = recursion_coeffs(0.5);
  EXPECT_EQ(step({0.5, 0.5}, rc).status, StepStatus::LeftDomain);
  EXPECT_EQ(step({0.5, -0.1}, rc).status, StepStatus::LeftDomain);
}

TEST(Dynamics, FixedPointCount) {
  EXPECT_EQ(fixed_points(0.2).size(), 1U);
  const auto two = fixed_points(0.5);
  ASSERT_EQ(two.size(), 2U);
  const auto rc = recursion_coeffs(0.5);
  for (const auto& p : two) EXPECT_LT(fixed_point_residual(p, rc), 1e-12);
  const auto& g = two[1];
  EXPECT_NEAR(rc.b2 * g.x * g.x + rc.a2 * g.y * g.y, 1.0, 1e-12);
  EXPECT_NEAR(rc.b1 * g.x * g.x + rc.a1 * g.y * g.y, 1.0, 1e-12);
  EXPECT_NEAR(g.x, 0.6615754414924713, 1e-13);
  EXPECT_NEAR(g.y, 0.29856927176320835, 1e-13);
  EXPECT_EQ(fixed_points(critical_points().beta_star).size(), 1U);
}

TEST(Dynamics, TrajectoryOnAxisMatchesClosedForm) {
  const double beta = 1.2, c3 = std::pow(std::cosh(beta), 3), x0 = 0.9;
  const auto tr = trajectory({x0, 0.0}, beta);
  EXPECT_EQ(tr.outcome, Outcome::ConvergedToFree);
  ASSERT_TRUE(tr.limit.has_value());
  EXPECT_NEAR(tr.limit->x, 1.0 / c3, 1e-15);
  for (std::size_t n = 0; n < tr.points.size(); ++n) {
    const double closed = std::pow(x0 * c3, std::pow(3.0, -static_cast<double>(n))) / c3;
    EXPECT_NEAR(tr.points[n].x, closed, 1e-12) << n;
  }
}

TEST(Dynamics, TrajectoryInsideWindow) {
  const double beta = 0.5;
  const double t = line2_ratio(beta);
  const auto below = trajectory({0.9, 0.9 * 0.999 * t}, beta);
  EXPECT_EQ(below.outcome, Outcome::ConvergedToFree);
  const auto rc = recursion_coeffs(beta);
  for (std::size_t n = 1; n < below.points.size(); ++n) {
    const auto& a = below.points[n - 1];
    const auto& b = below.points[n];
    if (b.y == 0.0) break;
    EXPECT_LT(b.y / b.x, a.y / a.x) << n;
    EXPECT_NEAR(g_beta(b.y / b.x, rc), a.y / a.x, 1e-11);
  }

  const auto above = trajectory({0.9, 0.9 * 1.001 * t}, beta);
  EXPECT_EQ(above.outcome, Outcome::Breakdown);
  EXPECT_GT(above.breakdown_step, 0);
}

TEST(Dynamics, TrajectoryOnLine2) {
  const double beta = 0.5;
  const auto fps = fixed_points(beta);
  const double x0 = 0.9;
  const auto tr = trajectory({x0, x0 * fps[1].y / fps[1].x}, beta);
  EXPECT_TRUE(tr.on_line2);
  EXPECT_EQ(tr.outcome, Outcome::ConvergedToLine2);
  const double g0 = fps[1].x;
  for (std::size_t n = 0; n < tr.points.size(); ++n) {
    const double closed = g0 * std::pow(x0 / g0, std::pow(3.0, -static_cast<double>(n)));
    EXPECT_NEAR(tr.points[n].x, closed, 1e-10) << n;
  }
}

TEST(Dynamics, TrajectoryOutsideWindowBreaksDown) {
  for (double beta : {0.2, 1.2, 2.0}) {
    const auto tr = trajectory({0.9, 0.3}, beta);
    EXPECT_EQ(tr.outcome, Outcome::Breakdown) << beta;
  }
  EXPECT_THROW(trajectory({0.3, 0.9}, 0.5), std::invalid_argument);
  EXPECT_THROW(trajectory({0.9, 0.1}, 0.5, 0), std::invalid_argument);
}

TEST(Dynamics, NoPeriodicPoints) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(0.05, 2.0), ur(0.0, 0.999);
  for (int i = 0; i < 20; ++i) {
    const double x = ux(rng);
    EXPECT_FALSE(detect_periodic(0.5, {x, x * ur(rng)}, 6, 1e-10));
  }
  EXPECT_FALSE(detect_periodic(1.2, {0.9, 0.0}, 6, 1e-10));
  // A fixed point is stationary, not periodic.
  EXPECT_FALSE(detect_periodic(0.5, fixed_points(0.5)[1], 6, 1e-10));
  EXPECT_THROW(detect_periodic(0.5, {0.9, 0.1}, 1, 1e-10), std::invalid_argument);
}

}  // namespace
}  // namespace qmc
