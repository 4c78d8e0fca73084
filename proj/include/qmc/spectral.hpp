#pragma once

// Boundary fields in span{sigma_0, sigma_1}, the one-vertex trace map over
// three successors, and the 2x2 transfer matrix A that propagates a sigma_1
// insertion from the outer level to the root.

#include "qmc/model.hpp"

#include <Eigen/Dense>

namespace qmc {

/// h0 sigma_0 + h1 sigma_1 on one site.
struct BoundaryField {
  double h0 = 0.0;
  double h1 = 0.0;

  [[nodiscard]] Mat2 matrix() const;
  // Positive definite as an operator.
  [[nodiscard]] bool is_positive() const { return h0 > std::abs(h1); }
};

/// (1/cosh^3, 0).
BoundaryField alpha_field(double beta);

/// (sqrt(DE), sqrt(E)), positive branch. Throws std::domain_error outside the
/// open window.
BoundaryField gamma_field(double beta);

/// tr_x[K1 K2 K3 h_a h_b h_c K3 K2 K1] for a vertex x with forward successors
/// carrying h_a, h_b, h_c. The three slots are not interchangeable.
BoundaryField transfer_three(const BoundaryField& a, const BoundaryField& b,
                             const BoundaryField& c, double beta);

/// Same trace with sigma_1 inserted at the first successor (on the right).
BoundaryField sigma1_insertion(const BoundaryField& a, const BoundaryField& b,
                               const BoundaryField& c, double beta);

struct CorrMatrix {
  double beta = 0.0;
  Eigen::Matrix2d a;
  double lambda2 = 0.0;
  double x1 = 0.0, y1 = 0.0;  // eigenvector for 1
  double x2 = 0.0, y2 = 0.0;  // eigenvector for lambda2

  [[nodiscard]] double trace() const { return a.trace(); }
  [[nodiscard]] double det() const { return a.determinant(); }
};

/// A built from gamma: the linear map h -> transfer_three(h, gamma, gamma).
/// Throws std::domain_error outside the open window.
CorrMatrix corr_matrix(double beta);

/// The same matrix written directly in sinh/cosh and A1..B2.
Eigen::Matrix2d corr_matrix_alternate(double beta);

/// Closed forms of tr(A) and det(A).
double corr_trace_closed(double beta);
double corr_det_closed(double beta);

struct EigenPairs {
  double lambda1 = 1.0;
  double lambda2 = 0.0;
  Eigen::Vector2d v1, v2;
  double residual1 = 0.0;  // max |A v - lambda v|
  double residual2 = 0.0;
};

EigenPairs eigen(const CorrMatrix& m);

/// A^n from the eigen-decomposition closed form. Throws for n < 0.
Eigen::Matrix2d matrix_power(const CorrMatrix& m, int n);

enum class BoundaryKind { Alpha0, Gamma };

/// The sigma_1 field passed down from the outer level for the gamma boundary,
/// i.e. sigma1_insertion(gamma, gamma, gamma).
BoundaryField gamma_insertion_field(double beta);

/// Expectation of sigma_1 at the first successor of the first vertex of W_N,
/// in the state with the given boundary. N >= 1. Gamma throws std::domain_error
/// outside the window.
double expectation_sigma1(BoundaryKind kind, double beta, int n);

/// Gamma expectation as limit + transient * lambda2^N.
struct GammaAsymptotics {
  double limit = 0.0;
  double transient = 0.0;
  double lambda2 = 0.0;
};
GammaAsymptotics gamma_asymptotics(double beta);

struct QuasiEquivGap {
  double epsilon0 = 0.0;
  int n0 = 0;
};

/// epsilon0 = half the N -> infinity Gamma expectation; n0 the first N with
/// |transient| lambda2^N <= epsilon0, so the gap is at least epsilon0 for all
/// N > n0.
QuasiEquivGap quasi_equiv_gap(double beta);

}  // namespace qmc
