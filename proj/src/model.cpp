#include "qmc/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qmc {

namespace {

void require_positive_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("beta must be finite and > 0");
  }
}

template <std::size_t N>
double horner(const std::array<double, N>& coeffs_high_first, double t) {
  double acc = 0.0;
  for (double c : coeffs_high_first) acc = acc * t + c;
  return acc;
}

double bisect_p9(double lo, double hi) {
  double flo = p9_eval(lo);
  const double fhi = p9_eval(hi);
  if (!(flo * fhi < 0.0)) {
    throw std::logic_error("P9 has no sign change on the bracket");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // adjacent doubles
    const double fm = p9_eval(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  // Of the two final endpoints, take the one with the smaller residual.
  return std::abs(p9_eval(lo)) <= std::abs(p9_eval(hi)) ? lo : hi;
}

}  // namespace

EdgeGateCoeffs EdgeGateCoeffs::at(double beta) {
  const double c = std::cosh(beta);
  const double s = std::sinh(beta);
  return {(1.0 + c) / 2.0, s / 2.0, s / 2.0, (1.0 - c) / 2.0};
}

std::array<double, 4> gate_identity_residuals(const EdgeGateCoeffs& k, double beta) {
  const double c = std::cosh(beta);
  const double s = std::sinh(beta);
  return {
      k.k0 * k.k0 + k.k1 * k.k1 + k.k2 * k.k2 + k.k3 * k.k3 - c * c,
      2.0 * (k.k0 * k.k1 - k.k2 * k.k3) - s * c,
      2.0 * (k.k0 * k.k1 + k.k2 * k.k3) - s,
      k.k0 * k.k0 + k.k1 * k.k1 - k.k2 * k.k2 - k.k3 * k.k3 - c,
  };
}

TwoSiteOperator edge_hamiltonian() {
  const Mat4 h = 0.5 * (kron_chain({pauli(1), pauli(1)}) + kron_chain({pauli(2), pauli(2)}));
  return TwoSiteOperator::from_dense(h);
}

TwoSiteOperator edge_gate(double beta) {
  require_positive_beta(beta);
  const Mat4 h = edge_hamiltonian().matrix();
  const Mat4 dense =
      Mat4::Identity() + std::sinh(beta) * h + (std::cosh(beta) - 1.0) * (h * h);
  const auto pauli_form = TwoSiteOperator::from_diag_pauli(EdgeGateCoeffs::at(beta).as_array());
  if ((pauli_form.matrix() - dense).cwiseAbs().maxCoeff() > 1e-12 * std::cosh(beta)) {
    throw std::logic_error("edge gate closed form and Pauli form disagree");
  }
  return pauli_form;
}

RecursionCoeffs recursion_coeffs(double beta) {
  require_positive_beta(beta);
  const double c = std::cosh(beta);
  const double s = std::sinh(beta);
  RecursionCoeffs r;
  r.beta = beta;
  r.a1 = s * s * s * c;
  r.b1 = s * c * c * (1.0 + c + c * c);
  r.a2 = s * s * c * c * (1.0 + 2.0 * c);
  r.b2 = std::pow(c, 6);
  if (std::abs(r.b1 - r.b2) >= 1e-14) {
    const double d = (r.a2 - r.a1) / (r.b1 - r.b2);
    r.d = d;
    r.e = 1.0 / (r.a2 + d * r.b2);
  }
  return r;
}

std::array<double, 4> recursion_coeff_derivatives(double beta) {
  require_positive_beta(beta);
  const double c = std::cosh(beta);
  const double s = std::sinh(beta);
  const double c2 = c * c, c3 = c2 * c, c4 = c3 * c, c5 = c4 * c;
  const double s2 = s * s, s3 = s2 * s;
  // A1 = s^3 c
  const double da1 = 3.0 * s2 * c2 + s2 * s2;
  // B1 = s (c^2 + c^3 + c^4)
  const double db1 = c3 + c4 + c5 + s2 * (2.0 * c + 3.0 * c2 + 4.0 * c3);
  // A2 = s^2 (c^2 + 2 c^3)
  const double da2 = 2.0 * s * c3 + 4.0 * s * c4 + 2.0 * c * s3 + 6.0 * c2 * s3;
  // B2 = c^6
  const double db2 = 6.0 * c5 * s;
  return {da1, db1, da2, db2};
}

double p9_eval(double t) {
  return horner(std::array<double, 10>{1, -1, -1, -1, 0, 2, 2, 0, -1, -1}, t);
}

double q10_eval(double t) {
  return horner(std::array<double, 11>{1, 4, 5, -4, -14, -6, 11, 8, -3, -2, 1}, t);
}

double q7_eval(double t) {
  return horner(std::array<double, 8>{1, 2, 0, -3, -2, 1, 3, 1}, t);
}

double q4_eval(double t) {
  return horner(std::array<double, 5>{-1, -1, 1, 5, 2}, t);
}

CriticalPoints solve_critical_points() {
  CriticalPoints out;
  out.t_star = bisect_p9(1.05, 1.1);
  out.t_star2 = bisect_p9(1.5, 1.6);
  out.beta_star = std::acosh(out.t_star);
  out.beta_star2 = std::acosh(out.t_star2);
  out.residual_star = std::abs(p9_eval(out.t_star));
  out.residual_star2 = std::abs(p9_eval(out.t_star2));
  return out;
}

const CriticalPoints& critical_points() {
  static const CriticalPoints cp = solve_critical_points();
  return cp;
}

bool in_window(double beta) {
  const auto& cp = critical_points();
  return beta > cp.beta_star && beta < cp.beta_star2;
}

std::vector<double> default_beta_grid() {
  const auto& cp = critical_points();
  std::vector<double> grid;
  grid.reserve(500);
  const double lo = std::log(1e-3);
  const double hi = std::log(3.0);
  for (int i = 0; i < 400; ++i) grid.push_back(std::exp(lo + (hi - lo) * i / 399.0));
  for (int i = 1; i <= 100; ++i) {
    grid.push_back(cp.beta_star + (cp.beta_star2 - cp.beta_star) * i / 101.0);
  }
  std::sort(grid.begin(), grid.end());
  return grid;
}

bool LemmaReport::all_pass() const {
  if (!flips_at_critical_points) return false;
  return std::all_of(points.begin(), points.end(), [](const LemmaPoint& p) {
    return std::all_of(p.clauses.begin(), p.clauses.end(),
                       [](const ClauseCheck& c) { return c.pass; });
  });
}

std::string LemmaReport::first_failure() const {
  static const char* names[] = {"(i)", "(ii)", "(iii)", "(iv)", "(v)", "(vi)", "(vii)", "(viii)"};
  for (const auto& p : points) {
    for (std::size_t i = 0; i < p.clauses.size(); ++i) {
      if (!p.clauses[i].pass) {
        std::ostringstream os;
        os.precision(17);
        os << "clause " << names[i] << " fails at beta=" << p.beta
           << " margin=" << p.clauses[i].margin;
        return os.str();
      }
    }
  }
  if (!flips_at_critical_points) return "clause (iii) sign flips are not bracketed at beta*, beta**";
  return {};
}

LemmaReport verify_lemma_inequalities(const std::vector<double>& beta_grid) {
  LemmaReport report;
  std::vector<double> grid = beta_grid;
  std::sort(grid.begin(), grid.end());
  report.points.reserve(grid.size());

  auto check = [](double slack) { return ClauseCheck{slack > 0.0, slack}; };
  auto both = [](ClauseCheck a, ClauseCheck b) {
    return ClauseCheck{a.pass && b.pass, std::min(a.margin, b.margin)};
  };

  for (double beta : grid) {
    const auto r = recursion_coeffs(beta);
    const double c = std::cosh(beta);
    const double s = std::sinh(beta);
    LemmaPoint pt;
    pt.beta = beta;
    pt.inside = in_window(beta);

    // (i) P9(cosh beta) is negative exactly inside the window.
    const double p9 = p9_eval(c);
    pt.clauses[0] = check(pt.inside ? -p9 : p9);
    // (ii)
    pt.clauses[1] = check(r.a2 - r.a1);
    // (iii) B1 <= B2 outside, B1 > B2 inside.
    pt.clauses[2] = pt.inside ? check(r.b1 - r.b2) : ClauseCheck{r.b1 <= r.b2, r.b2 - r.b1};
    // (iv), with the polynomial form as a second witness.
    pt.clauses[3] = both(check(r.a2 + r.b2 - r.a1 - r.b1), check(q10_eval(c)));
    // (v) only claimed inside.
    if (pt.inside) {
      if (r.d && r.e) {
        pt.clauses[4] = both(check(*r.d - 1.0), check(*r.e));
      } else {
        pt.clauses[4] = {false, 0.0};
      }
    }
    // (vi)
    pt.clauses[5] = both(check(r.b1 * r.b2 - r.a1 * r.a2), check(r.a2 * r.b1 - r.a1 * r.b2));
    // (vii) only claimed inside; Q7, Q4 are the factored forms.
    if (pt.inside) {
      const auto lhs = both(check(r.a1 * r.a2 + 3.0 * r.a1 * r.b2 + r.b1 * r.b2 - r.a2 * r.b1),
                            check(r.a2 * r.b1 - 2.0 * r.a1 * r.a2 - 3.0 * r.a1 * r.b2));
      pt.clauses[6] = both(lhs, both(check(q7_eval(c)), check(q4_eval(c))));
    }
    // (viii)
    pt.clauses[7] = check(c * c * c - s * (1.0 + c));
    report.points.push_back(pt);
  }

  const auto& cp = critical_points();
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const auto r0 = recursion_coeffs(grid[i - 1]);
    const auto r1 = recursion_coeffs(grid[i]);
    if ((r0.b1 > r0.b2) != (r1.b1 > r1.b2)) report.flip_cells.emplace_back(grid[i - 1], grid[i]);
  }
  auto contains = [](std::pair<double, double> cell, double b) {
    return cell.first <= b && b <= cell.second;
  };
  report.flips_at_critical_points = report.flip_cells.size() == 2 &&
                                    contains(report.flip_cells[0], cp.beta_star) &&
                                    contains(report.flip_cells[1], cp.beta_star2);
  return report;
}

}  // namespace qmc
