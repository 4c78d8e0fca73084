#pragma once

// The thermodynamic function F(beta) = lim (1/|V_n|) log tr(K~_n K~_n^*) / beta,
// with the alpha0 boundary outside the critical window and the gamma boundary
// inside it.

#include <optional>
#include <string>

namespace qmc {

enum class Regime { Unique, Window };
std::string to_string(Regime r);

/// Window iff beta is strictly between the critical points.
Regime regime(double beta);

struct FreeEnergyPoint {
  double beta = 0.0;
  double F = 0.0;
  Regime regime = Regime::Unique;
  std::optional<double> F_prime_left, F_prime_right;
};

/// beta F: 12 log cosh outside; 12 log cosh + log(1 + u) inside, where
/// 1 + u = 1 / (B2 D E). Equivalent to -4 log alpha0 and -2 log(alpha0 gamma0).
double beta_F_closed(double beta);
double F_closed(double beta);

/// log tr(K~_n K~_n^*) from its closed form.
double log_trace_closed(double beta, int n);

/// beta F_n = log_trace_closed / |V_n|, divided by beta.
double F_finite_n(double beta, int n);

/// dF/dbeta of the formula for one branch, evaluated at beta (the Window
/// formula extends to the closed window, where u = 0 at the ends).
double F_prime_branch(double beta, Regime branch);

FreeEnergyPoint free_energy_point(double beta);

enum class CriticalPoint { BetaStar, BetaStar2 };

struct JumpReport {
  double beta_c = 0.0;
  // F'(inside) - F'(outside): right minus left at beta*, left minus right at beta**.
  double closed = 0.0;
  double analytic = 0.0;  // from the two branch derivatives
  double numeric = 0.0;   // one-sided central differences
  double relative_error = 0.0;  // |numeric - closed| / |closed|
};

/// A2 (B1' - B2') / ((A2 - A1) B2 beta) at the critical point, with numeric
/// one-sided slopes from central differences of half-width h centered at
/// beta_c -/+ 2h.
JumpReport derivative_jump(CriticalPoint at, double h = 1e-6);

}  // namespace qmc
