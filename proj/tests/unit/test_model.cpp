#include "qmc/model.hpp"

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace qmc {
namespace {

// Roots of P9 from an independent numpy/mpmath computation.
constexpr double kTStar = 1.0877354961639525;
constexpr double kTStar2 = 1.5745611480680644;

TEST(Model, HamiltonianAlgebra) {
  const Mat4 h = edge_hamiltonian().matrix();
  EXPECT_LT((h * h * h - h).cwiseAbs().maxCoeff(), 1e-15);
  const Mat4 expected_sq = 0.5 * (Mat4::Identity() - kron_chain({pauli(3), pauli(3)}));
  EXPECT_LT((h * h - expected_sq).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(std::abs(h.trace()), 0.0, 1e-15);
  EXPECT_TRUE(h.isApprox(h.adjoint()));
}

TEST(Model, EdgeGateMatchesMatrixExponential) {
  const Mat4 h = edge_hamiltonian().matrix();
  for (double beta : {0.3, 0.5, 1.0}) {
    const Mat4 expm = (beta * h).exp();
    const Mat4 k = edge_gate(beta).matrix();
    EXPECT_LT((k - expm).cwiseAbs().maxCoeff(), 1e-12) << beta;
    EXPECT_TRUE(k.isApprox(k.adjoint()));
  }
  EXPECT_THROW(edge_gate(0.0), std::invalid_argument);
  EXPECT_THROW(edge_gate(-1.0), std::invalid_argument);
}

TEST(Model, EdgeGateSpectrum) {
  for (double beta : {0.01, 0.4, 1.3, 2.5}) {
    Eigen::SelfAdjointEigenSolver<Mat4> es(edge_gate(beta).matrix());
    const auto ev = es.eigenvalues();
    EXPECT_NEAR(ev(0), std::exp(-beta), 1e-12);
    EXPECT_NEAR(ev(1), 1.0, 1e-12);
    EXPECT_NEAR(ev(2), 1.0, 1e-12);
    EXPECT_NEAR(ev(3), std::exp(beta), 1e-12 * std::exp(beta));
  }
}

TEST(Model, GateCoefficientIdentities) {
  const auto k = EdgeGateCoeffs::at(1.0);
  for (double r : gate_identity_residuals(k, 1.0)) EXPECT_LT(std::abs(r), 1e-14);
  const double lo = std::log(1e-3), hi = std::log(3.0);
  for (int i = 0; i < 50; ++i) {
    const double beta = std::exp(lo + (hi - lo) * i / 49.0);
    const double scale = std::cosh(beta) * std::cosh(beta);
    for (double r : gate_identity_residuals(EdgeGateCoeffs::at(beta), beta)) {
      EXPECT_LT(std::abs(r), 1e-14 * scale) << beta;
    }
  }
  // Small-beta limit is the identity gate.
  const auto k0 = EdgeGateCoeffs::at(1e-9);
  EXPECT_NEAR(k0.k0, 1.0, 1e-15);
  EXPECT_NEAR(k0.k1, 0.0, 1e-8);
  EXPECT_NEAR(k0.k3, 0.0, 1e-15);
}

TEST(Model, FlippedK1FailsIdentities) {
  auto k = EdgeGateCoeffs::at(0.7);
  k.k1 = -k.k1;
  const auto r = gate_identity_residuals(k, 0.7);
  EXPECT_GT(std::abs(r[1]), 0.1);
}

TEST(Model, RecursionCoeffsClosedForms) {
  const auto r = recursion_coeffs(0.5);
  const double c = std::cosh(0.5), s = std::sinh(0.5);
  EXPECT_DOUBLE_EQ(r.b2, std::pow(c, 6));
  EXPECT_NEAR(r.a1, std::pow(s, 3) * c, 1e-15);
  ASSERT_TRUE(r.d && r.e);
  EXPECT_NEAR(*r.d, 4.909853489034275, 1e-12);
  EXPECT_NEAR(*r.e, 0.08914361004121256, 1e-14);
  EXPECT_NEAR(r.gamma0_squared(), *r.d * *r.e, 1e-14);
  EXPECT_NEAR(r.gamma1_squared(), *r.e, 1e-14);

  const auto tiny = recursion_coeffs(1e-8);
  EXPECT_LT(tiny.a1, 1e-20);
  EXPECT_LT(tiny.a2, 1e-14);
  EXPECT_LT(tiny.b1, 1e-7);
  EXPECT_NEAR(tiny.b2, 1.0, 1e-14);
  EXPECT_THROW(recursion_coeffs(0.0), std::invalid_argument);
}

TEST(Model, DerivativesMatchCentralDifferences) {
  for (double beta : {0.2, 0.6, 1.1, 2.0}) {
    const double h = 1e-5;
    const auto p = recursion_coeffs(beta + h);
    const auto m = recursion_coeffs(beta - h);
    const auto d = recursion_coeff_derivatives(beta);
    const double fd[] = {(p.a1 - m.a1) / (2 * h), (p.b1 - m.b1) / (2 * h),
                         (p.a2 - m.a2) / (2 * h), (p.b2 - m.b2) / (2 * h)};
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(d[static_cast<std::size_t>(i)], fd[i], 1e-7 * (1 + std::abs(fd[i]))) << beta << " " << i;
  }
}

TEST(Model, Polynomials) {
  EXPECT_EQ(p9_eval(1.0), 0.0);
  EXPECT_GT(p9_eval(1.05), 0.0);
  EXPECT_LT(p9_eval(1.1), 0.0);
  EXPECT_GT(q4_eval(1.7), 0.0);
  EXPECT_LT(q4_eval(1.8), 0.0);
  // Factorizations of the coefficient combinations.
  for (double beta : {0.45, 0.7, 0.95}) {
    const auto r = recursion_coeffs(beta);
    const double c = std::cosh(beta), s = std::sinh(beta);
    EXPECT_NEAR(r.a1 * r.a2 + 3 * r.a1 * r.b2 - r.a2 * r.b1 + r.b1 * r.b2, s * std::pow(c, 3) * q7_eval(c), 1e-11);
    EXPECT_NEAR(r.a2 * r.b1 - 3 * r.a1 * r.b2 - 2 * r.a1 * r.a2, std::pow(s, 3) * std::pow(c, 3) * q4_eval(c), 1e-11);
    EXPECT_EQ(std::signbit(r.a2 + r.b2 - r.a1 - r.b1), std::signbit(q10_eval(c)));
  }
}

TEST(Model, CriticalPoints) {
  const auto& cp = critical_points();
  EXPECT_GT(cp.t_star, 1.05);
  EXPECT_LT(cp.t_star, 1.1);
  EXPECT_GT(cp.t_star2, 1.5);
  EXPECT_LT(cp.t_star2, 1.6);
  EXPECT_NEAR(cp.t_star, kTStar, 1e-13);
  EXPECT_NEAR(cp.t_star2, kTStar2, 1e-13);
  EXPECT_LT(cp.residual_star, 1e-12);
  EXPECT_LT(cp.residual_star2, 1e-12);
  EXPECT_NEAR(std::cosh(cp.beta_star), cp.t_star, 1e-14);
  EXPECT_NEAR(cp.beta_star, 0.41588885792858, 1e-12);
  EXPECT_NEAR(cp.beta_star2, 1.02632915689639, 1e-12);
}

TEST(Model, DeflatedP9HasTwoSignChangesOnOneToTwo) {
  int changes = 0;
  double prev = p9_eval(1.0 + 1e-4) / 1e-4;
  for (int i = 2; i < 10000; ++i) {
    const double t = 1.0 + i * 1e-4;
    const double cur = p9_eval(t) / (t - 1.0);
    if ((cur < 0) != (prev < 0)) {
      ++changes;
      const auto& cp = critical_points();
      const double root = changes == 1 ? cp.t_star : cp.t_star2;
      EXPECT_LE(t - 1e-4, root);
      EXPECT_GE(t, root);
    }
    prev = cur;
  }
  EXPECT_EQ(changes, 2);
}

TEST(Model, DAndEUndefinedAtCriticalPoints) {
  const auto r = recursion_coeffs(critical_points().beta_star);
  EXPECT_FALSE(r.d.has_value());
  EXPECT_FALSE(r.e.has_value());
  EXPECT_NEAR(r.gamma1_squared(), 0.0, 1e-13);
}

TEST(Model, DefaultGrid) {
  const auto g = default_beta_grid();
  EXPECT_EQ(g.size(), 500U);
  EXPECT_NEAR(g.front(), 1e-3, 1e-15);
  EXPECT_NEAR(g.back(), 3.0, 1e-12);
  EXPECT_TRUE(std::is_sorted(g.begin(), g.end()));
}

TEST(Model, LemmaInequalitiesOnDefaultGrid) {
  const auto rep = verify_lemma_inequalities(default_beta_grid());
  EXPECT_TRUE(rep.all_pass()) << rep.first_failure();
  ASSERT_EQ(rep.flip_cells.size(), 2U);
  EXPECT_TRUE(rep.flips_at_critical_points);
}

TEST(Model, LemmaSpotChecks) {
  const auto rep = verify_lemma_inequalities({0.5, 1.0});
  // (viii) at beta = 1 and (vi) at beta = 0.5.
  EXPECT_TRUE(rep.points[1].clauses[7].pass);
  EXPECT_TRUE(rep.points[0].clauses[5].pass);
  EXPECT_TRUE(rep.points[0].inside);
  EXPECT_GT(rep.points[0].clauses[2].margin, 0.0);  // B1 > B2 inside
}

}  // namespace
}  // namespace qmc
