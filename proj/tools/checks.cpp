#include "checks.hpp"

#include "qmc/dynamics.hpp"
#include "qmc/free_energy.hpp"
#include "qmc/model.hpp"
#include "qmc/oracle.hpp"
#include "qmc/spectral.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace qmc::checks {

namespace {

struct Verdict {
  bool ok = false;
  std::string detail;
};

class Detail {
 public:
  Detail() { os_.precision(3); }
  void precision(int p) { os_.precision(p); }
  template <class T>
  Detail& operator<<(const T& v) {
    os_ << v;
    return *this;
  }
  operator std::string() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

Result timed(std::string id, std::string title, double budget, const std::function<Verdict()>& fn) {
  Result r;
  r.id = std::move(id);
  r.title = std::move(title);
  r.budget_seconds = budget;
  const auto t0 = std::chrono::steady_clock::now();
  Verdict o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.pass = o.ok && (budget <= 0.0 || r.seconds < budget);
  r.detail = o.detail;
  if (o.ok && !r.pass) r.detail += " (over time budget)";
  return r;
}

std::vector<double> linspace_open(double lo, double hi, int count) {
  std::vector<double> out;
  for (int i = 1; i <= count; ++i) out.push_back(lo + (hi - lo) * i / (count + 1.0));
  return out;
}

std::vector<double> logspace(double lo, double hi, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (count - 1.0)));
  }
  return out;
}

Verdict ac1() {
  const auto cp = solve_critical_points();
  const bool ok = cp.t_star > 1.05 && cp.t_star < 1.1 && cp.t_star2 > 1.5 && cp.t_star2 < 1.6 &&
                  cp.residual_star < 1e-12 && cp.residual_star2 < 1e-12;
  Detail d;
  d.precision(17);
  d << "t*=" << cp.t_star << " t**=" << cp.t_star2 << " |P9|=" << std::max(cp.residual_star, cp.residual_star2);
  return {ok, d};
}

Verdict ac2() {
  double worst = 0.0, worst_map = 0.0;
  for (double beta : {0.3, 0.5, 0.8, 1.2, 2.0}) {
    worst = std::max(worst, verify_mainsystem_coeffs(beta).max_deviation);
    worst_map = std::max(worst_map, verify_eq2(beta, {0.8, 0.3}).residual_vs_transfer);
  }
  Detail d;
  d << "coefficient deviation " << worst << ", map deviation at h=(0.8,0.3) " << worst_map;
  return {worst < 1e-10 && worst_map < 1e-10, d};
}

Verdict ac3() {
  const auto& cp = critical_points();
  auto outside = logspace(1e-3, cp.beta_star * (1 - 1e-6), 25);
  const auto above = logspace(cp.beta_star2 * (1 + 1e-6), 3.0, 25);
  outside.insert(outside.end(), above.begin(), above.end());
  const auto inside = linspace_open(cp.beta_star, cp.beta_star2, 50);
  double worst = 0.0;
  int bad_count = 0;
  auto scan = [&](const std::vector<double>& betas, std::size_t expected) {
    for (double beta : betas) {
      const auto fps = fixed_points(beta);
      if (fps.size() != expected) ++bad_count;
      const auto rc = recursion_coeffs(beta);
      for (const auto& p : fps) worst = std::max(worst, fixed_point_residual(p, rc));
    }
  };
  scan(outside, 1);
  scan(inside, 2);
  Detail d;
  d << "count mismatches " << bad_count << ", max residual " << worst;
  return {bad_count == 0 && worst < 1e-12, d};
}

Verdict ac4() {
  const auto rep = verify_lemma_inequalities(default_beta_grid());
  Detail d;
  d << rep.points.size() << " grid points, " << rep.flip_cells.size() << " flip cells";
  if (!rep.all_pass()) d << "; " << rep.first_failure();
  return {rep.all_pass() && rep.flip_cells.size() == 2, d};
}

Verdict ac5() {
  const auto& cp = critical_points();
  double id = 0.0, forms = 0.0, power = 0.0;
  bool det_ok = true;
  for (double beta : linspace_open(cp.beta_star, cp.beta_star2, 20)) {
    const auto m = corr_matrix(beta);
    id = std::max(id, std::abs(m.trace() - m.det() - 1.0));
    det_ok = det_ok && m.det() > 0.0 && m.det() < 1.0;
    forms = std::max(forms, (m.a - corr_matrix_alternate(beta)).cwiseAbs().maxCoeff());
    Eigen::Matrix2d p = Eigen::Matrix2d::Identity();
    for (int n = 0; n <= 30; ++n) {
      power = std::max(power, (matrix_power(m, n) - p).cwiseAbs().maxCoeff());
      p = p * m.a;
    }
  }
  Detail d;
  d << "tr-det-1 " << id << ", forms " << forms << ", A^n " << power;
  return {id < 1e-12 && det_ok && forms < 1e-12 && power < 1e-11, d};
}

Verdict ac6(Level level) {
  const double beta = 0.5;
  if (!in_window(beta)) return {false, "beta = 0.5 not inside the window"};
  const auto gap = quasi_equiv_gap(beta);
  bool alpha_zero = true;
  double gamma_min = INFINITY;
  for (int n = 1; n <= gap.n0 + 200; ++n) {
    alpha_zero = alpha_zero && expectation_sigma1(BoundaryKind::Alpha0, beta, n) == 0.0;
    if (n > gap.n0) gamma_min = std::min(gamma_min, expectation_sigma1(BoundaryKind::Gamma, beta, n));
  }
  bool ok = alpha_zero && gap.epsilon0 > 0.0 && gamma_min >= gap.epsilon0;
  Detail d;
  d.precision(6);
  d << "eps0=" << gap.epsilon0 << " N0=" << gap.n0 << " min gamma=" << gamma_min;
  if (level == Level::Full) {
    const auto word = sigma1_observable(2);
    const double oracle =
        finite_volume_expectation(word, 2, beta, BoundaryCondition::gamma(beta), StateForm::Reduced);
    const double oracle_alpha =
        finite_volume_expectation(word, 2, beta, BoundaryCondition::alpha0(beta), StateForm::Reduced);
    const double dev = std::abs(oracle - expectation_sigma1(BoundaryKind::Gamma, beta, 1));
    ok = ok && dev < 1e-9 && std::abs(oracle_alpha) < 1e-9;
    d.precision(3);
    d << ", Lambda_2 oracle deviation " << dev;
  } else {
    d << ", oracle comparison skipped (quick)";
  }
  return {ok, d};
}

Verdict ac7() {
  const double beta = 0.5, tol = 1e-9;
  const auto g = verify_compatibility(beta, BoundaryCondition::gamma(beta), 0);
  const auto a = verify_compatibility(beta, BoundaryCondition::alpha0(beta), 0);
  auto perturbed = BoundaryCondition::gamma(beta);
  perturbed.h_by_level[0].h1 *= 1.1;
  const auto neg = verify_compatibility(beta, perturbed, 0);
  const bool ok = g.boundary_valid && a.boundary_valid && g.deviation < tol && a.deviation < tol &&
                  !neg.boundary_valid && neg.deviation >= 1e6 * tol;
  Detail d;
  d << "gamma " << g.deviation << ", alpha0 " << a.deviation << ", perturbed " << neg.deviation;
  return {ok, d};
}

Verdict ac8() {
  const double dev = verify_alpha_family_invariance(1.2, {0.5, 1.0, 2.0}, 0);
  Detail d;
  d << "max pairwise deviation " << dev;
  return {dev < 1e-10, d};
}

Verdict ac9() {
  const auto& cp = critical_points();
  double cont = 0.0;
  for (double b : {cp.beta_star, cp.beta_star2}) {
    cont = std::max(cont, std::abs(F_closed(b - 1e-8) - F_closed(b + 1e-8)));
  }
  const auto j1 = derivative_jump(CriticalPoint::BetaStar);
  const auto j2 = derivative_jump(CriticalPoint::BetaStar2);
  const bool ok = cont < 1e-6 && j1.closed != 0.0 && j2.closed != 0.0 && j1.relative_error < 1e-3 &&
                  j2.relative_error < 1e-3;
  Detail d;
  d.precision(6);
  d << "|dF| " << cont << ", jumps " << j1.closed << " / " << j2.closed << ", rel err "
    << j1.relative_error << " / " << j2.relative_error;
  return {ok, d};
}

Verdict ac10(std::uint64_t seed) {
  // (a) diagonal starts against x_n = (x0 c^3)^{1/3^n} / c^3.
  double closed_dev = 0.0;
  for (double beta : {0.2, 0.5, 1.2, 2.0}) {
    const double c3 = std::pow(std::cosh(beta), 3);
    for (double x0 : {0.1, 0.9, 1.7}) {
      const auto tr = trajectory({x0, 0.0}, beta);
      for (std::size_t n = 0; n < tr.points.size(); ++n) {
        const double closed = std::pow(x0 * c3, std::pow(3.0, -static_cast<double>(n))) / c3;
        closed_dev = std::max(closed_dev, std::abs(tr.points[n].x - closed));
      }
    }
  }
  // (b) either side of the invariant line inside the window.
  int wrong = 0;
  for (double beta : {0.5, 0.8}) {
    const double t = 1.0 / std::sqrt(*recursion_coeffs(beta).d);
    for (double x0 : {0.3, 0.9, 1.5}) {
      const auto below = trajectory({x0, x0 * 0.99 * t}, beta);
      if (below.outcome != Outcome::ConvergedToFree) ++wrong;
      if (below.limit && std::abs(below.limit->x - std::pow(std::cosh(beta), -3)) > 1e-11) ++wrong;
      if (trajectory({x0, x0 * std::min(1.01 * t, 0.999)}, beta).outcome != Outcome::Breakdown) ++wrong;
    }
  }
  // (c) no recurrence before classification.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ub(0.05, 2.5), ux(0.05, 2.0), ur(0.0, 0.999);
  int periodic = 0;
  for (int i = 0; i < 100; ++i) {
    const double beta = ub(rng), x = ux(rng), r = ur(rng);
    if (detect_periodic(beta, {x, x * r}, 10, 1e-10)) ++periodic;
  }
  Detail d;
  d << "closed-form deviation " << closed_dev << ", misclassified " << wrong
    << ", periodic starts " << periodic << "/100";
  return {closed_dev < 1e-12 && wrong == 0 && periodic == 0, d};
}

}  // namespace

std::vector<Result> acceptance(const Options& opt) {
  std::vector<Result> out;
  out.push_back(timed("AC1", "critical points", 1e-3, ac1));
  out.push_back(timed("AC2", "recursion coefficient oracle", 1.0, ac2));
  out.push_back(timed("AC3", "fixed point dichotomy", 1.0, ac3));
  out.push_back(timed("AC4", "lemma inequality suite", 1.0, ac4));
  out.push_back(timed("AC5", "transfer matrix identities", 1.0, ac5));
  out.push_back(timed("AC6", "phase transition certificate", 120.0, [&] { return ac6(opt.level); }));
  out.push_back(timed("AC7", "compatibility", 30.0, ac7));
  out.push_back(timed("AC8", "alpha family invariance", 5.0, ac8));
  out.push_back(timed("AC9", "free energy", 1.0, ac9));
  out.push_back(timed("AC10", "trajectory theorems", 10.0, [&] { return ac10(opt.seed); }));
  return out;
}

std::vector<Result> identities(const Options& opt) {
  std::vector<Result> out;
  out.push_back(timed("gate-identities", "edge gate coefficient identities", 0.0, [&] {
    double worst = 0.0;
    for (double beta : logspace(1e-3, 3.0, 40)) {
      auto k = EdgeGateCoeffs::at(beta);
      if (opt.faults.flip_k1) k.k1 = -k.k1;
      const double scale = std::cosh(beta) * std::cosh(beta);
      for (double r : gate_identity_residuals(k, beta)) worst = std::max(worst, std::abs(r) / scale);
    }
    Detail d;
    d << "max scaled residual " << worst;
    return Verdict{worst < opt.identity_tol, d};
  }));
  out.push_back(timed("dense-vertex", "dense vertex trace vs closed forms", 0.0, [] {
    double worst = 0.0;
    for (double beta : {0.3, 0.7, 1.5}) {
      const BoundaryField a{0.9, 0.2}, b{0.7, -0.1}, c{1.1, 0.4};
      const auto p = dense_vertex_trace(beta, a, b, c, false);
      const auto q = transfer_three(a, b, c, beta);
      const auto pi = dense_vertex_trace(beta, a, b, c, true);
      const auto qi = sigma1_insertion(a, b, c, beta);
      worst = std::max({worst, std::abs(p.h0 - q.h0), std::abs(p.h1 - q.h1), std::abs(pi.h0 - qi.h0),
                        std::abs(pi.h1 - qi.h1)});
    }
    Detail d;
    d << "max deviation " << worst;
    return Verdict{worst < 1e-12, d};
  }));
  out.push_back(timed("reduced-form-n0", "reduced vs definition form, n = 0", 0.0, [] {
    const double dev = std::max(verify_wn_form(0.5, BoundaryCondition::gamma(0.5), 0),
                                verify_wn_form(0.3, BoundaryCondition::alpha0(0.3), 0));
    Detail d;
    d << "max deviation " << dev;
    return Verdict{dev < 1e-12, d};
  }));
  if (opt.level == Level::Quick) return out;

  out.push_back(timed("compat-n1", "compatibility, n = 1", 0.0, [&] {
    const auto g = verify_compatibility(0.5, BoundaryCondition::gamma(0.5), 1, opt.seed);
    const auto a = verify_compatibility(0.5, BoundaryCondition::alpha0(0.5), 1, opt.seed);
    Detail d;
    d << "gamma " << g.deviation << ", alpha0 " << a.deviation << " over " << g.words_checked
      << " words, seed " << opt.seed;
    return Verdict{g.deviation < 1e-9 && a.deviation < 1e-9, d};
  }));
  out.push_back(timed("reduced-form-n1", "reduced vs definition form, n = 1", 0.0, [] {
    const double dev = verify_wn_form(0.5, BoundaryCondition::gamma(0.5), 1);
    Detail d;
    d << "max deviation " << dev;
    return Verdict{dev < 1e-12, d};
  }));
  out.push_back(timed("free-energy-anchor", "free energy trace vs oracle, n = 0, 1", 0.0, [] {
    double worst = 0.0;
    for (double beta : {0.3, 0.6}) {
      const double w = in_window(beta) ? 1.0 / gamma_field(beta).h0 : 1.0 / alpha_field(beta).h0;
      const BoundaryCondition bc{"free-energy", {1.0, 0.0}, {{w, 0.0}}};
      for (int n : {0, 1}) {
        const auto prog = GateProgram::build(n + 1, beta, bc);
        const double lt = std::log(trace_words(prog, {PauliWord{}}).front().real());
        worst = std::max(worst, std::abs(lt - log_trace_closed(beta, n)));
      }
    }
    Detail d;
    d << "max log-trace deviation " << worst;
    return Verdict{worst < 1e-10, d};
  }));
  return out;
}

}  // namespace qmc::checks
