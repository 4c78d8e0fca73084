#include "qmc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qmc {

namespace {

constexpr double kRootSlack = 1e-12;
constexpr double kStepResidualTol = 1e-11;
constexpr double kStillTol = 1e-13;
constexpr double kNearFixedTol = 1e-11;
constexpr double kLine2RelTol = 1e-12;

// Real roots of t^3 + a t^2 + b t + c.
std::vector<double> real_cubic_roots(double a, double b, double c) {
  const double shift = a / 3.0;
  const double p = b - a * shift;
  const double q = 2.0 * shift * shift * shift - b * shift + c;
  std::vector<double> roots;
  const double half_q = q / 2.0;
  const double third_p = p / 3.0;
  const double disc = half_q * half_q + third_p * third_p * third_p;
  if (disc > 0.0) {
    // One real root; pick the cube-root branch without cancellation.
    const double big = -std::copysign(std::cbrt(std::abs(half_q) + std::sqrt(disc)), half_q);
    const double small = big != 0.0 ? -third_p / big : 0.0;
    roots.push_back(big + small - shift);
  } else if (p == 0.0) {
    roots.push_back(-shift);
  } else {
    const double m = 2.0 * std::sqrt(-third_p);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      roots.push_back(m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) - shift);
    }
  }
  return roots;
}

double max_norm_diff(const DynPoint& a, const DynPoint& b) {
  return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

StepResult step_from_ratio(const DynPoint& p, double ratio, const RecursionCoeffs& rc) {
  StepResult out;
  const double xn = std::cbrt(p.x / (rc.b2 + rc.a2 * ratio * ratio));
  out.point = {xn, ratio * xn};
  out.residual = forward_residual(out.point, p, rc);
  if (!out.point.in_domain()) {
    out.status = StepStatus::LeftDomain;
  } else if (!(out.residual < kStepResidualTol)) {
    out.status = StepStatus::ResidualFailure;
  }
  return out;
}

}  // namespace

double g_beta(double t, const RecursionCoeffs& rc) {
  return (rc.a1 * t * t * t + rc.b1 * t) / (rc.a2 * t * t + rc.b2);
}

std::vector<double> invert_ratio(double r, const RecursionCoeffs& rc) {
  const auto poly = [&](double t) {
    return ((rc.a1 * t - r * rc.a2) * t + rc.b1) * t - r * rc.b2;
  };
  const auto dpoly = [&](double t) {
    return (3.0 * rc.a1 * t - 2.0 * r * rc.a2) * t + rc.b1;
  };
  std::vector<double> out;
  for (double t : real_cubic_roots(-r * rc.a2 / rc.a1, rc.b1 / rc.a1, -r * rc.b2 / rc.a1)) {
    // Newton polish; the closed form can lose digits when A1 is small.
    for (int it = 0; it < 3; ++it) {
      const double d = dpoly(t);
      if (d == 0.0) break;
      const double dt = poly(t) / d;
      t -= dt;
      if (std::abs(dt) <= 1e-16 * std::max(1.0, std::abs(t))) break;
    }
    if (!std::isfinite(t) || t < -kRootSlack || t > 1.0 + kRootSlack) continue;
    out.push_back(std::clamp(t, 0.0, 1.0));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::abs(a - b) <= kRootSlack; }),
            out.end());
  return out;
}

double forward_residual(const DynPoint& next, const DynPoint& prev, const RecursionCoeffs& rc) {
  const double x = next.x, y = next.y;
  const double ex = rc.b2 * x * x * x + rc.a2 * x * y * y - prev.x;
  const double ey = rc.b1 * x * x * y + rc.a1 * y * y * y - prev.y;
  const double scale = std::max(std::abs(prev.x), std::abs(prev.y));
  return std::max(std::abs(ex), std::abs(ey)) / (scale > 0.0 ? scale : 1.0);
}

std::string to_string(StepStatus s) {
  switch (s) {
    case StepStatus::Ok: return "Ok";
    case StepStatus::NoPreimage: return "NoPreimage";
    case StepStatus::ResidualFailure: return "ResidualFailure";
    case StepStatus::LeftDomain: return "LeftDomain";
    case StepStatus::AmbiguousBranch: return "AmbiguousBranch";
  }
  return "?";
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::ConvergedToFree: return "ConvergedToFree";
    case Outcome::ConvergedToLine2: return "ConvergedToLine2";
    case Outcome::Breakdown: return "Breakdown";
    case Outcome::MaxStepsExceeded: return "MaxStepsExceeded";
  }
  return "?";
}

StepResult step(const DynPoint& p, const RecursionCoeffs& rc) {
  if (!p.in_domain()) return {StepStatus::LeftDomain, p, 0.0};
  const auto ratios = invert_ratio(p.y / p.x, rc);
  if (ratios.empty()) return {StepStatus::NoPreimage, p, 0.0};

  std::vector<StepResult> good;
  StepStatus worst = StepStatus::LeftDomain;
  for (double t : ratios) {
    auto res = step_from_ratio(p, t, rc);
    if (res.ok()) {
      good.push_back(res);
    } else if (res.status == StepStatus::ResidualFailure) {
      worst = StepStatus::ResidualFailure;
    }
  }
  if (good.size() == 1) return good.front();
  if (good.size() > 1) return {StepStatus::AmbiguousBranch, p, 0.0};
  return {worst, p, 0.0};
}

StepResult step_with_ratio(const DynPoint& p, double ratio, const RecursionCoeffs& rc) {
  if (!p.in_domain()) return {StepStatus::LeftDomain, p, 0.0};
  // Residual is taken against the start point moved onto the same ray.
  const DynPoint on_ray{p.x, ratio * p.x};
  return step_from_ratio(on_ray, ratio, rc);
}

double fixed_point_residual(const DynPoint& p, const RecursionCoeffs& rc) {
  const double x = p.x, y = p.y;
  return std::max(std::abs(rc.b2 * x * x * x + rc.a2 * x * y * y - x),
                  std::abs(rc.b1 * x * x * y + rc.a1 * y * y * y - y));
}

std::vector<DynPoint> fixed_points(double beta) {
  const auto rc = recursion_coeffs(beta);
  std::vector<DynPoint> out{{1.0 / std::pow(std::cosh(beta), 3), 0.0}};
  if (in_window(beta)) out.push_back({std::sqrt(rc.gamma0_squared()), std::sqrt(rc.gamma1_squared())});
  return out;
}

TrajectoryResult trajectory(const DynPoint& start, double beta, int max_steps) {
  if (!start.in_domain()) throw std::invalid_argument("trajectory start outside the domain x > y >= 0");
  if (max_steps < 1 || max_steps > 1000000) throw std::invalid_argument("max_steps must be in 1..1e6");
  const auto rc = recursion_coeffs(beta);
  const auto fps = fixed_points(beta);

  TrajectoryResult tr;
  tr.points.push_back(start);

  std::optional<double> line2_ratio;
  if (fps.size() == 2) {
    const double r2 = fps[1].y / fps[1].x;
    if (std::abs(start.y / start.x - r2) <= kLine2RelTol * r2) line2_ratio = r2;
  }
  tr.on_line2 = line2_ratio.has_value();

  for (int k = 1; k <= max_steps; ++k) {
    const DynPoint& cur = tr.points.back();
    const auto res = line2_ratio ? step_with_ratio(cur, *line2_ratio, rc) : step(cur, rc);
    if (!res.ok()) {
      tr.outcome = Outcome::Breakdown;
      tr.breakdown_step = k;
      tr.breakdown_status = res.status;
      return tr;
    }
    tr.points.push_back(res.point);
    if (max_norm_diff(res.point, cur) >= kStillTol) continue;
    for (std::size_t i = 0; i < fps.size(); ++i) {
      if (max_norm_diff(res.point, fps[i]) < kNearFixedTol) {
        tr.outcome = i == 0 ? Outcome::ConvergedToFree : Outcome::ConvergedToLine2;
        tr.limit = fps[i];
        return tr;
      }
    }
  }
  tr.outcome = Outcome::MaxStepsExceeded;
  return tr;
}

bool detect_periodic(double beta, const DynPoint& start, int max_period, double tol) {
  if (max_period < 2) throw std::invalid_argument("period must be >= 2");
  const auto tr = trajectory(start, beta);
  const auto& pts = tr.points;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (max_norm_diff(pts[i + 1], pts[i]) < tol) continue;
    for (int m = 2; m <= max_period && i + static_cast<std::size_t>(m) < pts.size(); ++m) {
      if (max_norm_diff(pts[i + static_cast<std::size_t>(m)], pts[i]) < tol) return true;
    }
  }
  return false;
}

}  // namespace qmc
