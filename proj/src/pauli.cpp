#include "qmc/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qmc {

namespace {

const std::array<Mat2, 4>& pauli_table() {
  static const std::array<Mat2, 4> table = [] {
    const Complex i{0.0, 1.0};
    std::array<Mat2, 4> t;
    t[0] << 1.0, 0.0, 0.0, 1.0;
    t[1] << 0.0, 1.0, 1.0, 0.0;
    t[2] << 0.0, -i, i, 0.0;
    t[3] << 1.0, 0.0, 0.0, -1.0;
    return t;
  }();
  return table;
}

// Deposit the bits of `compact` into the positions listed in `bit_positions`
// (most significant first).
std::size_t scatter_bits(std::size_t compact, const std::vector<int>& bit_positions) {
  std::size_t out = 0;
  const auto m = bit_positions.size();
  for (std::size_t j = 0; j < m; ++j) {
    if ((compact >> (m - 1 - j)) & 1U) out |= std::size_t{1} << bit_positions[j];
  }
  return out;
}

}  // namespace

bool Tolerance::close(double a, double b) const {
  return std::abs(a - b) <= abs + rel * std::max(std::abs(a), std::abs(b));
}

bool Tolerance::close(Complex a, Complex b) const {
  return std::abs(a - b) <= abs + rel * std::max(std::abs(a), std::abs(b));
}

const Mat2& pauli(int i) {
  if (i < 0 || i > 3) throw std::out_of_range("pauli: index " + std::to_string(i) + " not in 0..3");
  return pauli_table()[static_cast<std::size_t>(i)];
}

PauliProduct pauli_product(int i, int j) {
  if (i < 0 || i > 3 || j < 0 || j > 3) throw std::out_of_range("pauli_product: index not in 0..3");
  if (i == 0) return {j, 1.0};
  if (j == 0) return {i, 1.0};
  if (i == j) return {0, 1.0};
  // sigma_a sigma_b = i eps_abc sigma_c for a != b.
  const int k = 6 - i - j;
  const bool cyclic = (j - i + 3) % 3 == 1;
  return {k, cyclic ? Complex{0.0, 1.0} : Complex{0.0, -1.0}};
}

PauliVector PauliVector::from_matrix(const Mat2& m) {
  PauliVector v;
  for (int i = 0; i < 4; ++i) {
    // tr(sigma_i m) / 2, with sigma_i hermitian.
    v.c[static_cast<std::size_t>(i)] = (pauli(i).adjoint() * m).trace() / 2.0;
  }
  return v;
}

Mat2 PauliVector::matrix() const {
  Mat2 m = Mat2::Zero();
  for (int i = 0; i < 4; ++i) m += c[static_cast<std::size_t>(i)] * pauli(i);
  return m;
}

PauliVector PauliVector::adjoint() const {
  PauliVector v;
  for (std::size_t i = 0; i < 4; ++i) v.c[i] = std::conj(c[i]);
  return v;
}

bool PauliVector::is_hermitian(double tol) const {
  return std::all_of(c.begin(), c.end(), [tol](Complex z) { return std::abs(z.imag()) <= tol; });
}

TwoSiteOperator TwoSiteOperator::from_dense(const Mat4& m) {
  TwoSiteOperator op;
  op.m_ = m;
  return op;
}

TwoSiteOperator TwoSiteOperator::from_diag_pauli(const std::array<double, 4>& k) {
  TwoSiteOperator op;
  Mat4 m = Mat4::Zero();
  for (int i = 0; i < 4; ++i) {
    const Mat4 pp = kron_chain({pauli(i), pauli(i)});
    m += k[static_cast<std::size_t>(i)] * pp;
  }
  op.m_ = m;
  op.diag_pauli_ = k;
  return op;
}

DenseOp kron_chain(std::span<const Mat2> factors) {
  if (factors.empty()) throw std::invalid_argument("kron_chain: empty factor list");
  DenseOp out = factors.front();
  for (auto it = factors.begin() + 1; it != factors.end(); ++it) {
    DenseOp next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      for (Eigen::Index c = 0; c < out.cols(); ++c) {
        next.block<2, 2>(2 * r, 2 * c) = out(r, c) * (*it);
      }
    }
    out = std::move(next);
  }
  return out;
}

DenseOp kron_chain(std::initializer_list<Mat2> factors) {
  return kron_chain(std::span<const Mat2>(factors.begin(), factors.size()));
}

int site_count(const DenseOp& op) {
  if (op.rows() != op.cols()) throw std::invalid_argument("operator is not square");
  const auto dim = static_cast<std::size_t>(op.rows());
  if (dim == 0 || !std::has_single_bit(dim)) {
    throw std::invalid_argument("operator dimension is not a power of two");
  }
  return std::countr_zero(dim);
}

Complex normalized_trace(const DenseOp& op) {
  site_count(op);
  return op.trace() / static_cast<double>(op.rows());
}

DenseOp normalized_partial_trace(const DenseOp& op, std::span<const int> sites,
                                 std::span<const int> keep) {
  const int n = site_count(op);
  if (static_cast<std::size_t>(n) != sites.size()) {
    throw std::invalid_argument("normalized_partial_trace: operator has " + std::to_string(n) +
                                " sites but " + std::to_string(sites.size()) + " labels given");
  }
  std::vector<bool> kept(sites.size(), false);
  for (int label : keep) {
    auto pos = std::find(sites.begin(), sites.end(), label);
    if (pos == sites.end()) {
      throw std::invalid_argument("normalized_partial_trace: site " + std::to_string(label) +
                                  " is not in the operator's site set");
    }
    const auto p = static_cast<std::size_t>(pos - sites.begin());
    if (kept[p]) throw std::invalid_argument("normalized_partial_trace: duplicate site in keep");
    kept[p] = true;
  }

  std::vector<int> keep_bits;
  std::vector<int> traced_bits;
  for (std::size_t p = 0; p < sites.size(); ++p) {
    const int bit = n - 1 - static_cast<int>(p);
    (kept[p] ? keep_bits : traced_bits).push_back(bit);
  }

  const std::size_t keep_dim = std::size_t{1} << keep_bits.size();
  const std::size_t traced_dim = std::size_t{1} << traced_bits.size();
  DenseOp out = DenseOp::Zero(static_cast<Eigen::Index>(keep_dim), static_cast<Eigen::Index>(keep_dim));
  for (std::size_t r = 0; r < keep_dim; ++r) {
    const std::size_t r_full = scatter_bits(r, keep_bits);
    for (std::size_t c = 0; c < keep_dim; ++c) {
      const std::size_t c_full = scatter_bits(c, keep_bits);
      Complex acc = 0.0;
      for (std::size_t t = 0; t < traced_dim; ++t) {
        const std::size_t t_full = scatter_bits(t, traced_bits);
        acc += op(static_cast<Eigen::Index>(r_full | t_full), static_cast<Eigen::Index>(c_full | t_full));
      }
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc / static_cast<double>(traced_dim);
    }
  }
  return out;
}

}  // namespace qmc
