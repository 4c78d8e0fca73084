#include "qmc/free_energy.hpp"

#include "qmc/model.hpp"

#include <cmath>
#include <stdexcept>

namespace qmc {

namespace {

// u = A2 (B1 - B2) / ((A2 - A1) B2), zero at both critical points.
double window_u(const RecursionCoeffs& r) {
  return r.a2 * (r.b1 - r.b2) / ((r.a2 - r.a1) * r.b2);
}

double window_u_prime(double beta) {
  const auto r = recursion_coeffs(beta);
  const auto [da1, db1, da2, db2] = recursion_coeff_derivatives(beta);
  const double num = r.a2 * (r.b1 - r.b2);
  const double den = (r.a2 - r.a1) * r.b2;
  const double dnum = da2 * (r.b1 - r.b2) + r.a2 * (db1 - db2);
  const double dden = (da2 - da1) * r.b2 + (r.a2 - r.a1) * db2;
  return (dnum * den - num * dden) / (den * den);
}

double pow3(int e) { return std::pow(3.0, e); }

}  // namespace

std::string to_string(Regime r) { return r == Regime::Window ? "Window" : "Unique"; }

Regime regime(double beta) { return in_window(beta) ? Regime::Window : Regime::Unique; }

double beta_F_closed(double beta) {
  const double base = 12.0 * std::log(std::cosh(beta));
  if (regime(beta) == Regime::Unique) return base;
  return base + std::log1p(window_u(recursion_coeffs(beta)));
}

double F_closed(double beta) { return beta_F_closed(beta) / beta; }

double log_trace_closed(double beta, int n) {
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  // log alpha0 = -3 log cosh.
  const double log_a0 = -3.0 * std::log(std::cosh(beta));
  const double w = pow3(n + 1);
  if (regime(beta) == Regime::Unique) return (1.0 - 2.0 * w) * log_a0;
  const double log_g0 = 0.5 * std::log(recursion_coeffs(beta).gamma0_squared());
  return log_a0 - w * (log_a0 + log_g0);
}

double F_finite_n(double beta, int n) {
  const double volume = (pow3(n + 1) - 1.0) / 2.0;
  return log_trace_closed(beta, n) / volume / beta;
}

double F_prime_branch(double beta, Regime branch) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  double bf = 12.0 * std::log(std::cosh(beta));
  double dbf = 12.0 * std::tanh(beta);
  if (branch == Regime::Window) {
    const double u = window_u(recursion_coeffs(beta));
    bf += std::log1p(u);
    dbf += window_u_prime(beta) / (1.0 + u);
  }
  return dbf / beta - bf / (beta * beta);
}

FreeEnergyPoint free_energy_point(double beta) {
  FreeEnergyPoint p;
  p.beta = beta;
  p.F = F_closed(beta);
  p.regime = regime(beta);
  const auto& cp = critical_points();
  if (beta == cp.beta_star) {
    p.F_prime_left = F_prime_branch(beta, Regime::Unique);
    p.F_prime_right = F_prime_branch(beta, Regime::Window);
  } else if (beta == cp.beta_star2) {
    p.F_prime_left = F_prime_branch(beta, Regime::Window);
    p.F_prime_right = F_prime_branch(beta, Regime::Unique);
  } else {
    p.F_prime_left = p.F_prime_right = F_prime_branch(beta, p.regime);
  }
  return p;
}

JumpReport derivative_jump(CriticalPoint at, double h) {
  const auto& cp = critical_points();
  JumpReport rep;
  rep.beta_c = at == CriticalPoint::BetaStar ? cp.beta_star : cp.beta_star2;
  const double b = rep.beta_c;
  const auto r = recursion_coeffs(b);
  const auto d = recursion_coeff_derivatives(b);
  rep.closed = r.a2 * (d[1] - d[3]) / ((r.a2 - r.a1) * r.b2 * b);
  rep.analytic = F_prime_branch(b, Regime::Window) - F_prime_branch(b, Regime::Unique);

  const double left = (F_closed(b - h) - F_closed(b - 3.0 * h)) / (2.0 * h);
  const double right = (F_closed(b + 3.0 * h) - F_closed(b + h)) / (2.0 * h);
  rep.numeric = at == CriticalPoint::BetaStar ? right - left : left - right;
  rep.relative_error = std::abs(rep.numeric - rep.closed) / std::abs(rep.closed);
  return rep;
}

}  // namespace qmc
