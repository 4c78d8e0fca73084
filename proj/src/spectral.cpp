#include "qmc/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace qmc {

namespace {

void require_window(double beta) {
  if (!in_window(beta)) throw std::domain_error("beta outside the open critical window");
}

}  // namespace

Mat2 BoundaryField::matrix() const { return h0 * pauli(0) + h1 * pauli(1); }

BoundaryField alpha_field(double beta) {
  return {1.0 / std::pow(std::cosh(beta), 3), 0.0};
}

BoundaryField gamma_field(double beta) {
  require_window(beta);
  const auto rc = recursion_coeffs(beta);
  return {std::sqrt(rc.gamma0_squared()), std::sqrt(rc.gamma1_squared())};
}

BoundaryField transfer_three(const BoundaryField& a, const BoundaryField& b,
                             const BoundaryField& d, double beta) {
  const double c = std::cosh(beta);
  const double s = std::sinh(beta);
  const double c2 = c * c, c3 = c2 * c, c4 = c3 * c, c6 = c3 * c3;
  const double s2 = s * s;
  return {
      a.h0 * b.h0 * d.h0 * c6 + a.h0 * b.h1 * d.h1 * s2 * c3 + a.h1 * b.h1 * d.h0 * s2 * c3 +
          a.h1 * b.h0 * d.h1 * s2 * c2,
      a.h0 * b.h0 * d.h1 * s * c2 + a.h0 * b.h1 * d.h0 * s * c3 + a.h1 * b.h0 * d.h0 * s * c4 +
          a.h1 * b.h1 * d.h1 * s2 * s * c,
  };
}

BoundaryField sigma1_insertion(const BoundaryField& a, const BoundaryField& b,
                               const BoundaryField& d, double beta) {
  const double c = std::cosh(beta);
  const double s = std::sinh(beta);
  const double c2 = c * c, c3 = c2 * c, c4 = c3 * c, c5 = c4 * c;
  const double s2 = s * s;
  return {
      a.h0 * b.h0 * d.h1 * s2 * c + a.h0 * b.h1 * d.h0 * s2 * c2 + a.h1 * b.h0 * d.h0 * c5 +
          a.h1 * b.h1 * d.h1 * s2 * c2,
      a.h0 * b.h0 * d.h0 * s * c5 + a.h0 * b.h1 * d.h1 * s2 * s * c2 +
          a.h1 * b.h0 * d.h1 * s * c3 + a.h1 * b.h1 * d.h0 * s * c4,
  };
}

CorrMatrix corr_matrix(double beta) {
  require_window(beta);
  const auto g = gamma_field(beta);
  const auto rc = recursion_coeffs(beta);
  const double c = std::cosh(beta);
  const double s = std::sinh(beta);
  const double c2 = c * c, c3 = c2 * c;

  CorrMatrix m;
  m.beta = beta;
  m.a << c3 * c3 * g.h0 * g.h0 + s * s * c3 * g.h1 * g.h1,
      g.h0 * g.h1 * s * s * c2 * (1.0 + c),
      g.h0 * g.h1 * s * c2 * (1.0 + c),
      s * c3 * c * g.h0 * g.h0 + s * s * s * c * g.h1 * g.h1;

  const double den = s * c2 * (1.0 + c) * (1.0 + c);
  m.x1 = std::sqrt((rc.a2 - rc.a1) * (rc.b1 - rc.b2)) / den;
  m.y1 = (rc.b1 - rc.b2) / den;
  m.x2 = -m.y1;
  m.y2 = m.x1 / s;
  m.lambda2 = corr_det_closed(beta);
  return m;
}

Eigen::Matrix2d corr_matrix_alternate(double beta) {
  require_window(beta);
  const auto rc = recursion_coeffs(beta);
  const double c = std::cosh(beta);
  const double s = std::sinh(beta);
  const double cp2 = (1.0 + c) * (1.0 + c);
  const double root = std::sqrt((rc.a2 - rc.a1) * (rc.b1 - rc.b2));
  Eigen::Matrix2d a;
  a << c * (s + c * c * c) / (s * cp2), root / (s * c * c * cp2),
      root / (s * s * c * c * cp2), (s + c * c * c) / (c * cp2);
  return a;
}

double corr_trace_closed(double beta) {
  const double c = std::cosh(beta);
  const double s = std::sinh(beta);
  return (s + c * c) * (s + c * c * c) / (s * c * (1.0 + c) * (1.0 + c));
}

double corr_det_closed(double beta) {
  const double c = std::cosh(beta);
  const double s = std::sinh(beta);
  return (s * s + std::pow(c, 5) - s * c * (1.0 + c)) / (s * c * (1.0 + c) * (1.0 + c));
}

EigenPairs eigen(const CorrMatrix& m) {
  EigenPairs e;
  e.lambda2 = m.lambda2;
  e.v1 = {m.x1, m.y1};
  e.v2 = {m.x2, m.y2};
  e.residual1 = (m.a * e.v1 - e.v1).cwiseAbs().maxCoeff();
  e.residual2 = (m.a * e.v2 - e.lambda2 * e.v2).cwiseAbs().maxCoeff();
  return e;
}

Eigen::Matrix2d matrix_power(const CorrMatrix& m, int n) {
  if (n < 0) throw std::invalid_argument("matrix_power: n must be >= 0");
  if (n == 0) return Eigen::Matrix2d::Identity();
  const double s = std::sinh(m.beta);
  const double ln = std::pow(m.lambda2, n);
  const double x1 = m.x1, y1 = m.y1;
  const double den = x1 * x1 + y1 * y1 * s;
  Eigen::Matrix2d p;
  p << x1 * x1 + ln * y1 * y1 * s, x1 * y1 * s * (1.0 - ln),
      x1 * y1 * (1.0 - ln), ln * x1 * x1 + y1 * y1 * s;
  return p / den;
}

BoundaryField gamma_insertion_field(double beta) {
  const auto g = gamma_field(beta);
  return sigma1_insertion(g, g, g, beta);
}

double expectation_sigma1(BoundaryKind kind, double beta, int n) {
  if (n < 1) throw std::invalid_argument("expectation_sigma1: N must be >= 1");
  if (kind == BoundaryKind::Gamma) {
    const auto m = corr_matrix(beta);
    const auto h = gamma_insertion_field(beta);
    const Eigen::Vector2d v = matrix_power(m, n) * Eigen::Vector2d(h.h0, h.h1);
    return v(0) / std::sqrt(recursion_coeffs(beta).gamma0_squared());
  }
  const auto a = alpha_field(beta);
  auto h = sigma1_insertion(a, a, a, beta);
  for (int i = 0; i < n; ++i) h = transfer_three(h, a, a, beta);
  // w0 = sigma_0 / alpha0; the normalized trace keeps only the sigma_0 part.
  return h.h0 / a.h0;
}

GammaAsymptotics gamma_asymptotics(double beta) {
  const auto m = corr_matrix(beta);
  const auto h = gamma_insertion_field(beta);
  const double s = std::sinh(beta);
  const double g0 = std::sqrt(recursion_coeffs(beta).gamma0_squared());
  const double den = g0 * (m.x1 * m.x1 + m.y1 * m.y1 * s);
  return {
      (m.x1 * m.x1 * h.h0 + m.x1 * m.y1 * s * h.h1) / den,
      (m.y1 * m.y1 * s * h.h0 - m.x1 * m.y1 * s * h.h1) / den,
      m.lambda2,
  };
}

QuasiEquivGap quasi_equiv_gap(double beta) {
  const auto g = gamma_asymptotics(beta);
  QuasiEquivGap out;
  out.epsilon0 = g.limit / 2.0;
  if (!(out.epsilon0 > 0.0) || !(g.lambda2 > 0.0 && g.lambda2 < 1.0)) {
    throw std::runtime_error("quasi_equiv_gap: no positive gap (limit or lambda2 out of range)");
  }
  double tail = std::abs(g.transient);
  while (tail > out.epsilon0) {
    tail *= g.lambda2;
    ++out.n0;
  }
  return out;
}

}  // namespace qmc
