#pragma once

// Numbered acceptance criteria and the extra identity checks run by
// `qmc verify`. Tolerances and time budgets are fixed here; the acceptance
// binary and the CLI both report from these.

#include <cstdint>
#include <string>
#include <vector>

namespace qmc::checks {

enum class Level { Quick, Full };

struct Faults {
  bool flip_k1 = false;  // negate K1 before the gate identity check
};

struct Options {
  Level level = Level::Full;
  std::uint64_t seed = 20240611;
  // Threshold for the gate identity check, relative to cosh^2(beta).
  double identity_tol = 1e-12;
  Faults faults;
};

struct Result {
  std::string id;
  std::string title;
  bool pass = false;
  bool skipped = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;  // 0 means no budget
};

/// AC1..AC10 in order. Quick drops the Lambda_2 oracle comparison from AC6.
std::vector<Result> acceptance(const Options& opt);

/// Checks outside the numbered criteria: gate identities, dense vertex trace,
/// the reduced state form, and under Full the n = 1 compatibility and free
/// energy anchors.
std::vector<Result> identities(const Options& opt);

}  // namespace qmc::checks
