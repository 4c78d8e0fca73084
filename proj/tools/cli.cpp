#include "cli.hpp"

#include "checks.hpp"
#include "qmc/dynamics.hpp"
#include "qmc/free_energy.hpp"
#include "qmc/model.hpp"
#include "qmc/spectral.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#ifndef QMC_VERSION
#define QMC_VERSION "0.0.0"
#endif

namespace qmc::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  double tol_abs = 1e-12;
  double tol_rel = 1e-10;
  std::uint64_t seed = 20240611;
  std::string out;
};

struct Range {
  double beta_min = 0.05;
  double beta_max = 2.0;
  int steps = 100;

  [[nodiscard]] std::vector<double> grid() const {
    if (!(beta_min > 0.0)) throw UsageError("--beta-min must be > 0");
    if (beta_max < beta_min) throw UsageError("--beta-max must be >= --beta-min");
    if (steps < 1 || steps > 1000000) throw UsageError("--steps must be in 1..1000000");
    std::vector<double> g(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
      g[static_cast<std::size_t>(i)] =
          steps == 1 ? beta_min : beta_min + (beta_max - beta_min) * i / (steps - 1.0);
    }
    return g;
  }
};

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

class Csv {
 public:
  Csv(std::ostream& os, const std::string& command, const Common& c) : os_(os) {
    meta("command", command);
    meta("version", QMC_VERSION);
    meta("seed", std::to_string(c.seed));
    meta("tol_abs", num(c.tol_abs));
    meta("tol_rel", num(c.tol_rel));
  }
  void meta(const std::string& key, const std::string& value) { os_ << "# " << key << '=' << value << '\n'; }
  void row(std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& c : cells) {
      if (!first) os_ << ',';
      os_ << c;
      first = false;
    }
    os_ << '\n';
  }

 private:
  std::ostream& os_;
};

void require_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw UsageError("--beta must be a positive number");
}

int cmd_critical(Csv& csv) {
  const auto& cp = critical_points();
  csv.row({"name", "t", "beta", "residual"});
  csv.row({"beta_star", num(cp.t_star), num(cp.beta_star), num(cp.residual_star)});
  csv.row({"beta_star2", num(cp.t_star2), num(cp.beta_star2), num(cp.residual_star2)});
  return kOk;
}

int cmd_sweep(Csv& csv, const Range& range) {
  const auto grid = range.grid();
  csv.row({"beta", "regime", "n_fixed_points", "gamma0", "gamma1", "lambda2", "gap"});
  for (double beta : grid) {
    const auto fps = fixed_points(beta);
    if (regime(beta) == Regime::Window) {
      const auto m = corr_matrix(beta);
      const auto gap = quasi_equiv_gap(beta);
      csv.row({num(beta), "Window", std::to_string(fps.size()), num(fps[1].x), num(fps[1].y),
               num(m.lambda2), num(gap.epsilon0)});
    } else {
      csv.row({num(beta), "Unique", std::to_string(fps.size()), "", "", "", ""});
    }
  }
  return kOk;
}

int cmd_trajectory(Csv& csv, double beta, double x0, double y0, int max_steps) {
  require_beta(beta);
  if (!DynPoint{x0, y0}.in_domain()) throw UsageError("start point must satisfy x0 > y0 >= 0");
  if (max_steps < 1 || max_steps > 1000000) throw UsageError("--max-steps must be in 1..1000000");
  const auto tr = trajectory({x0, y0}, beta, max_steps);
  csv.meta("beta", num(beta));
  csv.meta("outcome", to_string(tr.outcome));
  csv.row({"step", "x", "y", "ratio", "event"});
  for (std::size_t n = 0; n < tr.points.size(); ++n) {
    const auto& p = tr.points[n];
    const bool last = n + 1 == tr.points.size();
    std::string event;
    if (last && tr.outcome != Outcome::Breakdown) event = to_string(tr.outcome);
    csv.row({std::to_string(n), num(p.x), num(p.y), num(p.y / p.x), event});
  }
  if (tr.outcome == Outcome::Breakdown) {
    csv.row({std::to_string(tr.breakdown_step), "", "", "",
             "Breakdown:" + to_string(tr.breakdown_status)});
  }
  return tr.outcome == Outcome::MaxStepsExceeded ? kNoConvergence : kOk;
}

int cmd_fixed_points(Csv& csv, double beta, const Common& c, std::ostream& err) {
  require_beta(beta);
  const auto rc = recursion_coeffs(beta);
  const auto fps = fixed_points(beta);
  csv.meta("beta", num(beta));
  csv.meta("regime", to_string(regime(beta)));
  csv.row({"kind", "x", "y", "residual"});
  int code = kOk;
  for (std::size_t i = 0; i < fps.size(); ++i) {
    const double res = fixed_point_residual(fps[i], rc);
    csv.row({i == 0 ? "free" : "gamma", num(fps[i].x), num(fps[i].y), num(res)});
    if (res > c.tol_abs + c.tol_rel * std::max(fps[i].x, fps[i].y)) {
      err << "fixed point residual " << res << " above tolerance\n";
      code = kVerifyFailed;
    }
  }
  return code;
}

int cmd_correlation(Csv& csv, double beta, int nmax) {
  require_beta(beta);
  if (nmax < 1 || nmax > 100000) throw UsageError("--nmax must be in 1..100000");
  if (!in_window(beta)) {
    throw UsageError("--beta must lie inside the critical window (" + num(critical_points().beta_star) +
                     ", " + num(critical_points().beta_star2) + ") for the gamma boundary");
  }
  const auto gap = quasi_equiv_gap(beta);
  const auto as = gamma_asymptotics(beta);
  csv.meta("beta", num(beta));
  csv.meta("lambda2", num(as.lambda2));
  csv.meta("epsilon0", num(gap.epsilon0));
  csv.meta("N0", std::to_string(gap.n0));
  csv.row({"N", "phi_alpha0", "phi_gamma", "gap"});
  for (int n = 1; n <= nmax; ++n) {
    const double a = expectation_sigma1(BoundaryKind::Alpha0, beta, n);
    const double g = expectation_sigma1(BoundaryKind::Gamma, beta, n);
    csv.row({std::to_string(n), num(a), num(g), num(std::abs(g - a))});
  }
  return kOk;
}

int cmd_free_energy(Csv& csv, const Range& range, std::optional<int> n) {
  const auto grid = range.grid();
  if (n && (*n < 0 || *n > 30)) throw UsageError("--n must be in 0..30");
  const double h = 1e-6;
  if (n) {
    csv.meta("n", std::to_string(*n));
    csv.row({"beta", "F", "F_prime_numeric", "F_n"});
  } else {
    csv.row({"beta", "F", "F_prime_numeric"});
  }
  for (double beta : grid) {
    if (!(beta > h)) throw UsageError("--beta-min must exceed the difference step 1e-6");
    const double fp = (F_closed(beta + h) - F_closed(beta - h)) / (2.0 * h);
    if (n) {
      csv.row({num(beta), num(F_closed(beta)), num(fp), num(F_finite_n(beta, *n))});
    } else {
      csv.row({num(beta), num(F_closed(beta)), num(fp)});
    }
  }
  return kOk;
}

int cmd_inequalities(Csv& csv, const std::optional<Range>& range, std::ostream& err) {
  const auto grid = range ? range->grid() : default_beta_grid();
  const auto rep = verify_lemma_inequalities(grid);
  const auto& cp = critical_points();
  // Critical points strictly inside the scanned range must each sit in one flip cell.
  std::size_t expected = 0;
  for (double b : {cp.beta_star, cp.beta_star2}) {
    if (grid.front() < b && b < grid.back()) ++expected;
  }
  bool flips_ok = rep.flip_cells.size() == expected;
  for (const auto& [lo, hi] : rep.flip_cells) {
    flips_ok = flips_ok && ((lo <= cp.beta_star && cp.beta_star <= hi) ||
                            (lo <= cp.beta_star2 && cp.beta_star2 <= hi));
  }
  csv.meta("flip_cells", std::to_string(rep.flip_cells.size()));
  csv.row({"beta", "inside", "i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "pass"});
  bool all = flips_ok;
  for (const auto& p : rep.points) {
    bool pass = true;
    for (const auto& c : p.clauses) pass = pass && c.pass;
    all = all && pass;
    const auto& c = p.clauses;
    csv.row({num(p.beta), p.inside ? "1" : "0", num(c[0].margin), num(c[1].margin), num(c[2].margin),
             num(c[3].margin), num(c[4].margin), num(c[5].margin), num(c[6].margin), num(c[7].margin),
             pass ? "1" : "0"});
  }
  if (!all) {
    const auto failure = rep.first_failure();
    err << "inequality check failed: "
        << (failure.empty() || !flips_ok ? std::string("clause (iii) flip cells do not match the critical points")
                                         : failure)
        << '\n';
  }
  return all ? kOk : kVerifyFailed;
}

int cmd_verify(std::ostream& os, const std::string& level, const Common& c, bool flip_k1) {
  checks::Options opt;
  if (level == "quick") {
    opt.level = checks::Level::Quick;
  } else if (level == "full") {
    opt.level = checks::Level::Full;
  } else {
    throw UsageError("--level must be quick or full");
  }
  opt.seed = c.seed;
  opt.identity_tol = c.tol_abs;
  opt.faults.flip_k1 = flip_k1;

  os << "qmc verify (" << level << "), version " << QMC_VERSION << ", seed " << c.seed
     << ", tol_abs " << c.tol_abs << ", tol_rel " << c.tol_rel << '\n';
  std::vector<std::string> failed;
  auto report = [&](const std::vector<checks::Result>& results) {
    for (const auto& r : results) {
      os << (r.pass ? "PASS " : "FAIL ") << std::left << std::setw(20) << r.id << r.title << ": "
         << r.detail << " [" << std::fixed << std::setprecision(3) << r.seconds << " s]"
         << std::defaultfloat << std::setprecision(6) << '\n';
      if (!r.pass) failed.push_back(r.id);
    }
  };
  report(checks::identities(opt));
  report(checks::acceptance(opt));
  if (failed.empty()) {
    os << "all checks passed\n";
    return kOk;
  }
  os << "failed:";
  for (const auto& f : failed) os << ' ' << f;
  os << '\n';
  return kVerifyFailed;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--tol-abs", c.tol_abs, "absolute tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--tol-rel", c.tol_rel, "relative tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--seed", c.seed, "seed for sampled checks");
  sub->add_option("--out", c.out, "output file (default stdout)");
}

void add_range(CLI::App* sub, Range& r) {
  sub->add_option("--beta-min", r.beta_min, "smallest beta");
  sub->add_option("--beta-max", r.beta_max, "largest beta");
  sub->add_option("--steps", r.steps, "number of grid points");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phase structure of the XY quantum Markov chain on the order-3 Cayley tree", "qmc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", QMC_VERSION);

  Common common;
  Range range;
  double beta = 0.5, x0 = 0.0, y0 = 0.0;
  int max_steps = 10000, nmax = 30, n = 0;
  std::string level = "quick";
  bool flip_k1 = false;

  auto* critical = app.add_subcommand("critical", "roots of the critical polynomial");
  add_common(critical, common);

  auto* sweep = app.add_subcommand("sweep", "regime and fixed points over a beta grid");
  add_common(sweep, common);
  add_range(sweep, range);

  auto* traj = app.add_subcommand("trajectory", "iterate the boundary recursion from (x0, y0)");
  add_common(traj, common);
  traj->add_option("--beta", beta)->required();
  traj->add_option("--x0", x0)->required();
  traj->add_option("--y0", y0)->required();
  traj->add_option("--max-steps", max_steps);

  auto* fixed = app.add_subcommand("fixed-points", "fixed points of the recursion at one beta");
  add_common(fixed, common);
  fixed->add_option("--beta", beta)->required();

  auto* corr = app.add_subcommand("correlation", "sigma_1 expectations for both boundaries");
  add_common(corr, common);
  corr->add_option("--beta", beta);
  corr->add_option("--nmax", nmax);

  auto* fe = app.add_subcommand("free-energy", "F(beta) and its numeric derivative");
  add_common(fe, common);
  add_range(fe, range);
  auto* n_opt = fe->add_option("--n", n, "also print the finite-volume value F_n");

  auto* ineq = app.add_subcommand("inequalities", "coefficient inequalities on a beta grid");
  add_common(ineq, common);
  add_range(ineq, range);

  auto* verify = app.add_subcommand("verify", "run the acceptance checks");
  add_common(verify, common);
  verify->add_option("--level", level, "quick or full");
  verify->add_flag("--inject-k1-sign-fault", flip_k1)->group("");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  auto dispatch = [&](std::ostream& os, std::ostream& diag) -> int {
    if (verify->parsed()) return cmd_verify(os, level, common, flip_k1);
    auto* sub = app.get_subcommands().front();
    Csv csv(os, sub->get_name(), common);
    if (critical->parsed()) return cmd_critical(csv);
    if (sweep->parsed()) return cmd_sweep(csv, range);
    if (traj->parsed()) return cmd_trajectory(csv, beta, x0, y0, max_steps);
    if (fixed->parsed()) return cmd_fixed_points(csv, beta, common, diag);
    if (corr->parsed()) return cmd_correlation(csv, beta, nmax);
    if (fe->parsed()) {
      return cmd_free_energy(csv, range, n_opt->count() ? std::optional<int>(n) : std::nullopt);
    }
    const bool custom = ineq->count("--beta-min") || ineq->count("--beta-max") || ineq->count("--steps");
    return cmd_inequalities(csv, custom ? std::optional<Range>(range) : std::nullopt, diag);
  };

  // Output is buffered so a rejected argument never leaves a partial header.
  std::ostringstream buf;
  int code = kUsage;
  try {
    code = dispatch(buf, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    code = kNoConvergence;
  }

  if (common.out.empty()) {
    out << buf.str();
  } else {
    std::ofstream file(common.out);
    if (!file) {
      err << "cannot open " << common.out << " for writing\n";
      return kUsage;
    }
    file << buf.str();
  }
  return code;
}

}  // namespace qmc::cli
