#pragma once

// The recursion (x', y') -> (x, y) with
//   x = B2 x'^3 + A2 x' y'^2,   y = B1 x'^2 y' + A1 y'^3
// read backwards: given the outer-level field (x, y), solve for the next one.
// The ratio t = y/x evolves by t_old = g_beta(t_new).

#include "qmc/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qmc {

struct DynPoint {
  double x = 0.0;  // diagonal boundary-field entry
  double y = 0.0;  // off-diagonal magnitude

  // Domain x > y >= 0.
  [[nodiscard]] bool in_domain() const { return x > y && y >= 0.0; }
};

/// (A1 t^3 + B1 t) / (A2 t^2 + B2).
double g_beta(double t, const RecursionCoeffs& rc);

/// Real roots in [0, 1] of A1 t^3 - r A2 t^2 + B1 t - r B2, sorted ascending.
/// Roots within 1e-12 outside [0, 1] are clamped in; others are dropped.
std::vector<double> invert_ratio(double r, const RecursionCoeffs& rc);

/// Max of the two equation residuals for (x', y') -> (x, y), relative to
/// max(|x|, |y|).
double forward_residual(const DynPoint& next, const DynPoint& prev, const RecursionCoeffs& rc);

enum class StepStatus { Ok, NoPreimage, ResidualFailure, LeftDomain, AmbiguousBranch };
std::string to_string(StepStatus s);

struct StepResult {
  StepStatus status = StepStatus::Ok;
  DynPoint point;  // valid only when status == Ok
  double residual = 0.0;

  [[nodiscard]] bool ok() const { return status == StepStatus::Ok; }
};

StepResult step(const DynPoint& p, const RecursionCoeffs& rc);

/// Step with the successor ratio fixed to `ratio` instead of solved for.
/// Used on the invariant line y/x = 1/sqrt(D), which the backward map does not
/// keep numerically stable.
StepResult step_with_ratio(const DynPoint& p, double ratio, const RecursionCoeffs& rc);

/// Residual of x = B2 x^3 + A2 x y^2, y = B1 x^2 y + A1 y^3 (absolute).
double fixed_point_residual(const DynPoint& p, const RecursionCoeffs& rc);

/// [(1/cosh^3, 0)] outside the window; adds (sqrt(DE), sqrt(E)) inside.
std::vector<DynPoint> fixed_points(double beta);

enum class Outcome { ConvergedToFree, ConvergedToLine2, Breakdown, MaxStepsExceeded };
std::string to_string(Outcome o);

struct TrajectoryResult {
  std::vector<DynPoint> points;  // points[0] is the start
  Outcome outcome = Outcome::MaxStepsExceeded;
  std::optional<DynPoint> limit;
  // For Breakdown: index of the step that failed (1-based) and why.
  int breakdown_step = 0;
  StepStatus breakdown_status = StepStatus::Ok;
  bool on_line2 = false;
};

/// Throws std::invalid_argument if start is outside the domain or max_steps
/// is outside 1..1e6.
TrajectoryResult trajectory(const DynPoint& start, double beta, int max_steps = 10000);

/// True if some point of the pre-classification trajectory recurs after m
/// steps, 2 <= m <= max_period, within tol in max-norm, while it moved by at
/// least tol in the next single step (stationary stretches do not count).
bool detect_periodic(double beta, const DynPoint& start, int max_period, double tol);

}  // namespace qmc
