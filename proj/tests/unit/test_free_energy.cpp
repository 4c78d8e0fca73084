#include "qmc/free_energy.hpp"

#include "qmc/model.hpp"
#include "qmc/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace qmc {
namespace {

// The trace in the free energy carries a root weight of 1 and sigma_0 / alpha0
// (outside) or sigma_0 / gamma0 (inside) on the outer level.
double oracle_log_trace(double beta, int n) {
  const double w = in_window(beta) ? 1.0 / gamma_field(beta).h0 : 1.0 / alpha_field(beta).h0;
  const BoundaryCondition bc{"free-energy", {1.0, 0.0}, {{w, 0.0}}};
  const auto prog = GateProgram::build(n + 1, beta, bc);
  return std::log(trace_words(prog, {PauliWord{}}).front().real());
}

TEST(FreeEnergy, ClosedFormOutsideWindow) {
  for (double beta : {0.1, 0.3, 1.5, 2.5}) {
    EXPECT_EQ(regime(beta), Regime::Unique);
    EXPECT_NEAR(F_closed(beta), 12.0 * std::log(std::cosh(beta)) / beta, 1e-15);
    EXPECT_NEAR(beta_F_closed(beta), -4.0 * std::log(alpha_field(beta).h0), 1e-13);
  }
}

TEST(FreeEnergy, ClosedFormInsideWindow) {
  for (double beta : {0.5, 0.7, 0.95}) {
    EXPECT_EQ(regime(beta), Regime::Window);
    const double a0 = alpha_field(beta).h0, g0 = gamma_field(beta).h0;
    EXPECT_NEAR(beta_F_closed(beta), -2.0 * std::log(a0 * g0), 1e-12);
  }
}

TEST(FreeEnergy, ContinuousAtCriticalPoints) {
  const auto& cp = critical_points();
  for (double bc : {cp.beta_star, cp.beta_star2}) {
    double prev = INFINITY;
    for (double eps : {1e-4, 1e-5, 1e-6, 1e-7, 1e-8}) {
      const double gap = std::abs(F_closed(bc - eps) - F_closed(bc + eps));
      EXPECT_LT(gap, 1e-6 + 100 * eps);
      EXPECT_LT(gap, prev * 1.0001);
      prev = gap;
    }
  }
  // gamma0 -> alpha0 at the lower critical point from inside.
  const double b = cp.beta_star + 1e-9;
  EXPECT_NEAR(gamma_field(b).h0, alpha_field(cp.beta_star).h0, 1e-4);
}

TEST(FreeEnergy, FiniteNClosedForms) {
  const double beta = 0.3, la = std::log(alpha_field(beta).h0);
  EXPECT_NEAR(beta * F_finite_n(beta, 2), (1.0 - 2.0 * 27.0) * la / 13.0, 1e-14);
  const double b2 = 0.6, la2 = std::log(alpha_field(b2).h0), lg = std::log(gamma_field(b2).h0);
  EXPECT_NEAR(b2 * F_finite_n(b2, 1), (la2 - 9.0 * (la2 + lg)) / 4.0, 1e-14);
  EXPECT_THROW(F_finite_n(0.3, -1), std::invalid_argument);
}

TEST(FreeEnergy, FiniteNConverges) {
  for (double beta : {0.2, 0.6, 0.9, 1.8}) {
    const double f = F_closed(beta);
    EXPECT_LT(std::abs(F_finite_n(beta, 10) - f), 1e-3 * std::abs(f)) << beta;
    for (int n = 2; n < 15; ++n) {
      EXPECT_LT(std::abs(F_finite_n(beta, n + 1) - f), std::abs(F_finite_n(beta, n) - f)) << n;
    }
  }
}

TEST(FreeEnergy, OracleAnchor) {
  for (double beta : {0.3, 0.6, 1.4}) {
    EXPECT_NEAR(oracle_log_trace(beta, 0), log_trace_closed(beta, 0), 1e-12) << beta;
  }
  // tr = alpha0^-5 outside, alpha0^-2 gamma0^-3 inside.
  EXPECT_NEAR(std::exp(log_trace_closed(0.3, 0)), std::pow(alpha_field(0.3).h0, -5), 1e-12);
  const double a0 = alpha_field(0.6).h0, g0 = gamma_field(0.6).h0;
  EXPECT_NEAR(std::exp(log_trace_closed(0.6, 0)), std::pow(a0, -2) * std::pow(g0, -3), 1e-11);
}

TEST(FreeEnergy, OracleAnchorLevelOne) {
  EXPECT_NEAR(oracle_log_trace(0.6, 1), log_trace_closed(0.6, 1), 1e-11);
}

TEST(FreeEnergy, BranchDerivativesMatchFiniteDifferences) {
  for (double beta : {0.2, 0.6, 0.9, 1.8}) {
    const double h = 1e-5;
    const double fd = (F_closed(beta + h) - F_closed(beta - h)) / (2 * h);
    EXPECT_NEAR(F_prime_branch(beta, regime(beta)), fd, 1e-5 * (1 + std::abs(fd))) << beta;
  }
  const double beta = 1.8;
  const double hand = (12.0 * std::tanh(beta) * beta - 12.0 * std::log(std::cosh(beta))) / (beta * beta);
  EXPECT_NEAR(F_prime_branch(beta, Regime::Unique), hand, 1e-14);
}

TEST(FreeEnergy, PointCarriesOneSidedSlopes) {
  const auto& cp = critical_points();
  const auto p = free_energy_point(cp.beta_star);
  ASSERT_TRUE(p.F_prime_left && p.F_prime_right);
  EXPECT_NE(*p.F_prime_left, *p.F_prime_right);
  const auto q = free_energy_point(0.6);
  EXPECT_EQ(q.regime, Regime::Window);
  EXPECT_EQ(*q.F_prime_left, *q.F_prime_right);
}

TEST(FreeEnergy, DerivativeJumps) {
  for (auto at : {CriticalPoint::BetaStar, CriticalPoint::BetaStar2}) {
    const auto j = derivative_jump(at);
    EXPECT_GT(std::abs(j.closed), 1e-3);
    EXPECT_NEAR(j.analytic, j.closed, 1e-10 * std::abs(j.closed));
    EXPECT_LT(j.relative_error, 1e-3);
  }
}

}  // namespace
}  // namespace qmc
