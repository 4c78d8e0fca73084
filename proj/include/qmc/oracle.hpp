#pragma once

// Brute-force finite-volume states on small trees. Everything here is
// computed from the edge gates and boundary operators directly, without the
// closed-form recursions, so it can serve as ground truth for them.
//
// Sites of Lambda_n are numbered level by level in forward order (root = 0)
// and site 0 is the most significant bit of a basis index. Lambda_m is then a
// prefix of Lambda_n for m <= n.

#include "qmc/pauli.hpp"
#include "qmc/spectral.hpp"
#include "qmc/tree.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qmc {

inline constexpr int kTreeOrder = 3;
inline constexpr int kMaxOracleSites = 16;

/// sqrt of a positive h0 sigma_0 + h1 sigma_1, again in span{sigma_0, sigma_1}.
/// Throws std::domain_error unless h0 > |h1|.
BoundaryField sqrt_field(const BoundaryField& h);

/// A tensor product of Pauli matrices; ops[p] acts on volume site p and sites
/// past the end carry the identity.
struct PauliWord {
  std::vector<int> ops;

  /// Smallest prefix length containing every non-identity factor.
  [[nodiscard]] int support() const;
  [[nodiscard]] std::string to_string() const;

  /// sigma_index at one tree vertex.
  static PauliWord single(const TreeCoord& site, int index);
  /// All 4^m words on the first m sites, in lexicographic order.
  static std::vector<PauliWord> all_on_prefix(int m);
};

/// Linear combination of Pauli words.
using Observable = std::vector<std::pair<Complex, PauliWord>>;

struct SiteState {
  int n_sites = 0;
  Eigen::VectorXcd amplitudes;

  static SiteState basis(int n_sites, std::size_t index);
};

/// Applies a 4x4 gate to volume sites (u, v), u as the high bit of the pair.
/// Throws std::out_of_range for a site outside the state and
/// std::invalid_argument for u == v.
void apply_gate(SiteState& state, int u, int v, const Mat4& gate);
void apply_gate(SiteState& state, int u, const Mat2& gate);

/// Boundary data: w0 at the root and an outer-level field per level (the last
/// entry is reused for deeper levels; a homogeneous boundary has one entry).
struct BoundaryCondition {
  std::string name;
  BoundaryField w0;
  std::vector<BoundaryField> h_by_level;

  [[nodiscard]] const BoundaryField& h_at(int level) const;

  /// w0 = sigma_0/alpha0, h = alpha0 sigma_0 on every level.
  static BoundaryCondition alpha0(double beta);
  /// w0 = sigma_0/gamma0, h = gamma0 sigma_0 + gamma1 sigma_1. Window only.
  static BoundaryCondition gamma(double beta);
  /// w0 = sigma_0/alpha, h at level n = (alpha cosh^3)^{1/3^n} / cosh^3 sigma_0.
  static BoundaryCondition alpha_family(double beta, double alpha, int max_level);
};

/// The operator K_n = w0^{1/2} K_[0,1] ... K_[n-1,n] h_n^{1/2} as an ordered
/// product of one- and two-site factors on Lambda_n.
class GateProgram {
 public:
  struct Op {
    int u = 0;
    int v = -1;  // -1 for a one-site factor
    Mat4 two = Mat4::Zero();
    Mat2 one = Mat2::Zero();
  };

  /// Throws std::invalid_argument if |Lambda_n| exceeds kMaxOracleSites or a
  /// boundary field is not positive.
  static GateProgram build(int n, double beta, const BoundaryCondition& bc);

  [[nodiscard]] int levels() const { return n_; }
  [[nodiscard]] int n_sites() const { return static_cast<int>(sites_.size()); }
  [[nodiscard]] const std::vector<TreeCoord>& sites() const { return sites_; }
  [[nodiscard]] const std::vector<Op>& ops() const { return ops_; }
  [[nodiscard]] int site_index(const TreeCoord& x) const;
  [[nodiscard]] bool is_real() const;

  /// state <- K_n state.
  void apply(SiteState& state) const;

 private:
  int n_ = 0;
  std::vector<TreeCoord> sites_;
  std::map<TreeCoord, int> index_;
  std::vector<Op> ops_;
};

/// Normalized tr(K_n K_n^* a) for each word, summed over the computational
/// basis.
std::vector<Complex> trace_words(const GateProgram& program, const std::vector<PauliWord>& words);

/// The same trace summed over the columns of an arbitrary orthonormal basis
/// (small volumes only; used to check basis independence).
Complex trace_word_in_basis(const GateProgram& program, const PauliWord& word,
                            const Eigen::MatrixXcd& basis);

enum class StateForm {
  Definition,  // tr(W_{n+1]} (a (x) 1)), boundary at level n+1
  Reduced,     // tr(W_{n]} a), boundary at level n; valid for compatible boundaries
};

/// phi^{(n)}(a) for hermitian Pauli words; checks that each value is real to
/// 1e-11 and throws std::runtime_error otherwise. Throws std::invalid_argument
/// when a word is supported outside Lambda_n or the volume is over the cap.
std::vector<double> finite_volume_expectations(const std::vector<PauliWord>& words, int n,
                                               double beta, const BoundaryCondition& bc,
                                               StateForm form = StateForm::Definition);
double finite_volume_expectation(const PauliWord& word, int n, double beta,
                                 const BoundaryCondition& bc,
                                 StateForm form = StateForm::Definition);
Complex finite_volume_expectation(const Observable& a, int n, double beta,
                                  const BoundaryCondition& bc,
                                  StateForm form = StateForm::Definition);

/// Sigma_1 at the first successor of the first vertex of W_{N}, identity elsewhere.
PauliWord sigma1_observable(int level);

struct Eq2Check {
  BoundaryField contraction;
  double off_span = 0.0;  // size of sigma_2, sigma_3 and imaginary parts
  double residual_vs_input = 0.0;
  double residual_vs_transfer = 0.0;
};

/// Dense 16-dim tr_x[K1 K2 K3 h h h K3 K2 K1] for one vertex and its three
/// successors, compared with h and with transfer_three(h, h, h).
Eq2Check verify_eq2(double beta, const BoundaryField& h);

/// Same dense contraction with separate successor fields and an optional
/// sigma_1 inserted at the first successor.
BoundaryField dense_vertex_trace(double beta, const BoundaryField& a, const BoundaryField& b,
                                 const BoundaryField& c, bool insert_sigma1);

struct ExtractedCoeffs {
  double a1 = 0.0, b1 = 0.0, a2 = 0.0, b2 = 0.0;
  std::optional<double> d;
  double max_deviation = 0.0;  // vs recursion_coeffs, max-norm
};

/// Reads A1, B1, A2, B2 off the dense contraction with probes h = (1, 0),
/// (1, 1), (1, 1/2); the map is a homogeneous cubic so three probes suffice.
ExtractedCoeffs verify_mainsystem_coeffs(double beta);

struct CompatibilityReport {
  double deviation = 0.0;
  double eq1_residual = 0.0;
  double eq2_residual = 0.0;
  bool boundary_valid = false;
  std::size_t words_checked = 0;
  std::uint64_t seed = 0;
};

/// Residuals of tr(w0 h_root) = 1 and of the dense vertex trace against the
/// next level, over levels 0..max_level.
std::pair<double, double> boundary_residuals(double beta, const BoundaryCondition& bc, int max_level);

/// max |phi^{(n+1)}(a) - phi^{(n)}(a)| over all words on Lambda_0 (n = 0) or 64
/// seeded random words on Lambda_1 (n = 1). For n = 1 the left side is taken
/// in the Reduced form, the Definition form would need Lambda_3.
CompatibilityReport verify_compatibility(double beta, const BoundaryCondition& bc, int n,
                                         std::uint64_t seed = 20240611);

/// Max pairwise deviation of phi^{(n)} over the alpha family, on all words of
/// Lambda_n.
double verify_alpha_family_invariance(double beta, const std::vector<double>& alphas, int n);

/// Max deviation between the Definition and Reduced forms of phi^{(n)} on all
/// words of Lambda_n.
double verify_wn_form(double beta, const BoundaryCondition& bc, int n);

}  // namespace qmc
