#include "qmc/pauli.hpp"

#include <gtest/gtest.h>

#include <random>

namespace qmc {
namespace {

DenseOp random_op(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  const int dim = 1 << n;
  DenseOp m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = Complex(nd(rng), nd(rng));
  return m;
}

TEST(Pauli, StandardMatrices) {
  Mat2 z;
  z << 1, 0, 0, -1;
  EXPECT_TRUE(pauli(3).isApprox(z));
  EXPECT_TRUE(pauli(0).isApprox(Mat2::Identity()));
  EXPECT_TRUE((pauli(1) * pauli(2)).isApprox(Complex(0, 1) * pauli(3)));
  EXPECT_THROW(pauli(4), std::out_of_range);
  EXPECT_THROW(pauli(-1), std::out_of_range);
}

TEST(Pauli, ProductTableMatchesDenseMultiplication) {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const auto p = pauli_product(i, j);
      const Mat2 diff = pauli(i) * pauli(j) - p.phase * pauli(p.index);
      EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-15) << i << "," << j;
    }
  }
  EXPECT_EQ(pauli_product(1, 1).index, 0);
  EXPECT_EQ(pauli_product(1, 1).phase, Complex(1, 0));
  EXPECT_EQ(pauli_product(1, 2).index, 3);
  EXPECT_EQ(pauli_product(1, 2).phase, Complex(0, 1));
  EXPECT_EQ(pauli_product(2, 1).phase, Complex(0, -1));
}

TEST(Pauli, VectorRoundTripAndHermiticity) {
  PauliVector v;
  v.c = {0.7, -0.2, 0.3, 1.1};
  EXPECT_TRUE(v.is_hermitian());
  EXPECT_TRUE(v.matrix().isApprox(v.matrix().adjoint()));
  const auto back = PauliVector::from_matrix(v.matrix());
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(back.c[i] - v.c[i]), 0.0, 1e-15);
  EXPECT_EQ(v.normalized_trace(), Complex(0.7));
  EXPECT_NEAR(std::abs(normalized_trace(v.matrix()) - v.c[0]), 0.0, 1e-15);

  PauliVector w;
  w.c = {1.0, Complex(0, 0.5), 0.0, 0.0};
  EXPECT_FALSE(w.is_hermitian());
  EXPECT_TRUE(w.adjoint().matrix().isApprox(w.matrix().adjoint()));
}

TEST(Pauli, NormalizedTrace) {
  EXPECT_NEAR(normalized_trace(DenseOp::Identity(8, 8)).real(), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(normalized_trace(pauli(1))), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(normalized_trace(kron_chain({pauli(3), pauli(3)}))), 0.0, 1e-15);
  EXPECT_THROW(normalized_trace(DenseOp::Zero(2, 4)), std::invalid_argument);
  EXPECT_THROW(normalized_trace(DenseOp::Zero(3, 3)), std::invalid_argument);
}

TEST(Pauli, TraceIsCyclic) {
  std::mt19937_64 rng(7);
  for (int n = 1; n <= 3; ++n) {
    const auto a = random_op(n, rng);
    const auto b = random_op(n, rng);
    EXPECT_NEAR(std::abs(normalized_trace(a * b) - normalized_trace(b * a)), 0.0, 1e-12);
  }
}

TEST(Pauli, KronChainLayout) {
  EXPECT_TRUE(kron_chain({pauli(0)}).isApprox(pauli(0)));
  // sigma_1 on the first (high) site swaps the two 2x2 blocks.
  const DenseOp x0 = kron_chain({pauli(1), pauli(0)});
  DenseOp expected = DenseOp::Zero(4, 4);
  expected(0, 2) = expected(1, 3) = expected(2, 0) = expected(3, 1) = 1.0;
  EXPECT_TRUE(x0.isApprox(expected));
  const DenseOp zz = kron_chain({pauli(3), pauli(3)});
  EXPECT_TRUE(zz.isApprox(Eigen::Vector4cd(1, -1, -1, 1).asDiagonal().toDenseMatrix()));
  EXPECT_THROW(kron_chain(std::span<const Mat2>{}), std::invalid_argument);
}

TEST(Pauli, PartialTraceExamples) {
  const int xyz[] = {10, 11, 12};
  const int x[] = {10};
  const auto id = normalized_partial_trace(DenseOp::Identity(8, 8), xyz, x);
  EXPECT_TRUE(id.isApprox(DenseOp::Identity(2, 2)));

  const int ab[] = {0, 1};
  const int a[] = {0};
  const auto z = normalized_partial_trace(kron_chain({pauli(0), pauli(1)}), ab, a);
  EXPECT_LT(z.cwiseAbs().maxCoeff(), 1e-15);

  const int missing[] = {5};
  EXPECT_THROW(normalized_partial_trace(DenseOp::Identity(4, 4), ab, missing), std::invalid_argument);
  EXPECT_THROW(normalized_partial_trace(DenseOp::Identity(8, 8), ab, a), std::invalid_argument);
}

TEST(Pauli, PartialTraceOfProductKeepsFactor) {
  // tr_{2,3}(A (x) B (x) C) = A tr(B) tr(C); keep order follows the site list.
  const Mat2 a = pauli(1) + 0.5 * pauli(3);
  const Mat2 b = 2.0 * pauli(0) + pauli(2);
  const Mat2 c = 0.3 * pauli(0) - pauli(1);
  const int sites[] = {0, 1, 2};
  const int keep[] = {0};
  const auto r = normalized_partial_trace(kron_chain({a, b, c}), sites, keep);
  EXPECT_TRUE(r.isApprox(DenseOp(a * 2.0 * 0.3)));
  const int keep_tail[] = {2, 0};
  const auto r2 = normalized_partial_trace(kron_chain({a, b, c}), sites, keep_tail);
  EXPECT_TRUE(r2.isApprox(2.0 * kron_chain({a, c})));
}

TEST(Pauli, PartialTraceTowerProperty) {
  std::mt19937_64 rng(11);
  const auto m = random_op(4, rng);
  const int s4[] = {0, 1, 2, 3};
  const int keep_once[] = {1};
  const int keep_first[] = {0, 1, 3};
  const int s3[] = {0, 1, 3};
  const auto once = normalized_partial_trace(m, s4, keep_once);
  const auto step1 = normalized_partial_trace(m, s4, keep_first);
  const auto twice = normalized_partial_trace(step1, s3, keep_once);
  EXPECT_LT((once - twice).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Pauli, DiagPauliTwoSiteOperator) {
  const auto op = TwoSiteOperator::from_diag_pauli({0.4, -0.1, 0.25, 2.0});
  Mat4 expected = Mat4::Zero();
  const double k[] = {0.4, -0.1, 0.25, 2.0};
  for (int i = 0; i < 4; ++i) {
    const Mat4 pp = kron_chain({pauli(i), pauli(i)});
    expected += k[i] * pp;
  }
  EXPECT_LT((op.matrix() - expected).cwiseAbs().maxCoeff(), 1e-14);
  ASSERT_TRUE(op.diag_pauli().has_value());
  EXPECT_FALSE(TwoSiteOperator::from_dense(expected).diag_pauli().has_value());
}

TEST(Tolerance, RelativeAndAbsolute) {
  const Tolerance tol;
  EXPECT_TRUE(tol.close(1.0, 1.0 + 1e-11));
  EXPECT_FALSE(tol.close(1.0, 1.0 + 1e-9));
  EXPECT_TRUE(tol.close(0.0, 5e-13));
  EXPECT_TRUE((Tolerance{1e-3, 0.0}).close(1000.0, 1000.5));
}

}  // namespace
}  // namespace qmc
