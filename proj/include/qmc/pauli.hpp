#pragma once

// One- and two-site operator algebra in the Pauli basis.
//
// Conventions:
//  * sigma_0 = identity, sigma_1 = x, sigma_2 = y, sigma_3 = z.
//  * Multi-site product bases are lexicographic with the FIRST listed site
//    as the most significant bit.
//  * Traces are normalized: the identity on any number of sites has trace 1,
//    and the partial trace averages over the traced sites.

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace qmc {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using DenseOp = Eigen::MatrixXcd;

/// Comparison tolerance: |a - b| <= abs + rel * max(|a|, |b|).
struct Tolerance {
  double rel = 1e-10;
  double abs = 1e-12;

  [[nodiscard]] bool close(double a, double b) const;
  [[nodiscard]] bool close(Complex a, Complex b) const;
};

/// Standard Pauli matrix sigma_i, i in 0..3. Throws std::out_of_range.
const Mat2& pauli(int i);

struct PauliProduct {
  int index;
  Complex phase;
};

/// sigma_i * sigma_j = phase * sigma_index, phase in {+1, -1, +i, -i}.
PauliProduct pauli_product(int i, int j);

/// A one-site operator sum_i c[i] sigma_i.
struct PauliVector {
  std::array<Complex, 4> c{};

  static PauliVector from_matrix(const Mat2& m);

  [[nodiscard]] Mat2 matrix() const;
  [[nodiscard]] PauliVector adjoint() const;
  [[nodiscard]] bool is_hermitian(double tol = 1e-12) const;
  // Normalized trace of the operator; only sigma_0 contributes.
  [[nodiscard]] Complex normalized_trace() const { return c[0]; }
};

/// A 4x4 operator on an ordered site pair (u, v), basis |u v> with u as the
/// high bit. `diag_pauli` is set when the operator is sum_i K_i sigma_i (x) sigma_i
/// with real K_i.
class TwoSiteOperator {
 public:
  TwoSiteOperator() = default;

  static TwoSiteOperator from_dense(const Mat4& m);
  static TwoSiteOperator from_diag_pauli(const std::array<double, 4>& k);

  [[nodiscard]] const Mat4& matrix() const { return m_; }
  [[nodiscard]] const std::optional<std::array<double, 4>>& diag_pauli() const {
    return diag_pauli_;
  }

 private:
  Mat4 m_ = Mat4::Zero();
  std::optional<std::array<double, 4>> diag_pauli_;
};

/// Tensor product in list order. Throws std::invalid_argument on an empty list.
DenseOp kron_chain(std::span<const Mat2> factors);
DenseOp kron_chain(std::initializer_list<Mat2> factors);

/// Ordinary trace divided by the dimension. Throws std::invalid_argument if
/// the operator is not square or its dimension is not a power of two.
Complex normalized_trace(const DenseOp& op);

/// Normalized partial trace of an operator on the ordered site list `sites`,
/// keeping the sites in `keep` (returned in the order they appear in `sites`).
/// Throws std::invalid_argument when `keep` is not a subset of `sites` or the
/// operator dimension does not match.
DenseOp normalized_partial_trace(const DenseOp& op, std::span<const int> sites,
                                 std::span<const int> keep);

/// Number of sites n for an operator of dimension 2^n; throws otherwise.
int site_count(const DenseOp& op);

}  // namespace qmc
