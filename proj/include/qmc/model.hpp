#pragma once

// XY model on the order-3 Cayley tree: edge operators, the scalar recursion
// coefficients, the critical polynomial and its roots, and grid checks of the
// coefficient inequalities the phase diagram rests on.

#include "qmc/pauli.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace qmc {

/// Coefficients of K = sum_i K_i sigma_i (x) sigma_i for K = exp(beta H).
struct EdgeGateCoeffs {
  double k0 = 1.0, k1 = 0.0, k2 = 0.0, k3 = 0.0;

  static EdgeGateCoeffs at(double beta);
  [[nodiscard]] std::array<double, 4> as_array() const { return {k0, k1, k2, k3}; }
};

/// Residuals of the four quadratic identities satisfied by the K_i:
///   K0^2+K1^2+K2^2+K3^2 = cosh^2, 2(K0K1-K2K3) = sinh cosh,
///   2(K0K1+K2K3) = sinh, K0^2+K1^2-K2^2-K3^2 = cosh.
std::array<double, 4> gate_identity_residuals(const EdgeGateCoeffs& k, double beta);

/// H = (sigma_1 sigma_1 + sigma_2 sigma_2) / 2 on one edge.
TwoSiteOperator edge_hamiltonian();

/// exp(beta H) built from the closed form 1 + sinh(beta) H + (cosh(beta) - 1) H^2.
/// diag_pauli carries the K_i. Throws std::invalid_argument unless beta > 0.
TwoSiteOperator edge_gate(double beta);

struct RecursionCoeffs {
  double beta = 0.0;
  double a1 = 0.0, b1 = 0.0, a2 = 0.0, b2 = 0.0;
  // Undefined where |B1 - B2| < 1e-14, i.e. at the critical points.
  std::optional<double> d, e;

  // gamma0^2 = DE and gamma1^2 = E, written without the B1 - B2 denominator.
  [[nodiscard]] double gamma0_squared() const { return (a2 - a1) / (a2 * b1 - a1 * b2); }
  [[nodiscard]] double gamma1_squared() const { return (b1 - b2) / (a2 * b1 - a1 * b2); }
};

/// Throws std::invalid_argument unless beta > 0.
RecursionCoeffs recursion_coeffs(double beta);

/// d/dbeta of (A1, B1, A2, B2), hand-differentiated.
std::array<double, 4> recursion_coeff_derivatives(double beta);

double p9_eval(double t);
double q10_eval(double t);
double q7_eval(double t);
double q4_eval(double t);

struct CriticalPoints {
  double t_star = 0.0, t_star2 = 0.0;
  double beta_star = 0.0, beta_star2 = 0.0;
  double residual_star = 0.0, residual_star2 = 0.0;
};

/// Roots of P9 in (1.05, 1.1) and (1.5, 1.6) by bisection. Throws
/// std::logic_error if a bracket has no sign change.
CriticalPoints solve_critical_points();
/// Cached solve_critical_points().
const CriticalPoints& critical_points();

/// Strictly inside (beta*, beta**).
bool in_window(double beta);

/// 400 log-spaced points on [1e-3, 3] merged with 100 points inside the window.
std::vector<double> default_beta_grid();

struct ClauseCheck {
  bool pass = true;
  // Signed slack of the tightest inequality in the clause; positive when it holds.
  double margin = 0.0;
};

struct LemmaPoint {
  double beta = 0.0;
  bool inside = false;
  // Index 0..7 for clauses (i)..(viii).
  std::array<ClauseCheck, 8> clauses{};
};

struct LemmaReport {
  std::vector<LemmaPoint> points;
  // Clause (iii) sign changes of B1 - B2 along the sorted grid, as cells
  // [beta_lo, beta_hi]; each must contain exactly one critical point.
  std::vector<std::pair<double, double>> flip_cells;
  bool flips_at_critical_points = false;

  [[nodiscard]] bool all_pass() const;
  [[nodiscard]] std::string first_failure() const;
};

LemmaReport verify_lemma_inequalities(const std::vector<double>& beta_grid);

}  // namespace qmc
