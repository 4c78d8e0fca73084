#include "qmc/oracle.hpp"

#include "qmc/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qmc {

namespace {

constexpr double kImagTol = 1e-11;
constexpr double kBoundaryTol = 1e-10;

std::size_t insert_zero_bit(std::size_t x, int bit) {
  const std::size_t low = x & ((std::size_t{1} << bit) - 1);
  return ((x >> bit) << (bit + 1)) | low;
}

int bit_of(int position, int n_sites) { return n_sites - 1 - position; }

template <class T, class M>
void kernel_two(T* v, std::size_t dim, int bit_u, int bit_v, const M& m) {
  const std::size_t mu = std::size_t{1} << bit_u;
  const std::size_t mv = std::size_t{1} << bit_v;
  const int lo = std::min(bit_u, bit_v);
  const int hi = std::max(bit_u, bit_v);
  for (std::size_t i = 0; i < dim / 4; ++i) {
    const std::size_t b = insert_zero_bit(insert_zero_bit(i, lo), hi);
    const std::size_t idx[4] = {b, b | mv, b | mu, b | mu | mv};
    const T a0 = v[idx[0]], a1 = v[idx[1]], a2 = v[idx[2]], a3 = v[idx[3]];
    for (int r = 0; r < 4; ++r) {
      v[idx[r]] = m(r, 0) * a0 + m(r, 1) * a1 + m(r, 2) * a2 + m(r, 3) * a3;
    }
  }
}

template <class T, class M>
void kernel_one(T* v, std::size_t dim, int bit, const M& m) {
  const std::size_t mb = std::size_t{1} << bit;
  for (std::size_t i = 0; i < dim / 2; ++i) {
    const std::size_t b = insert_zero_bit(i, bit);
    const T a0 = v[b], a1 = v[b | mb];
    v[b] = m(0, 0) * a0 + m(0, 1) * a1;
    v[b | mb] = m(1, 0) * a0 + m(1, 1) * a1;
  }
}

// A Pauli word acting on an m-site register: P e_j = phase(j) e_{j ^ flip}
// with phase(j) = i^{n_y} (-1)^{popcount(j & sign)}.
struct WordAction {
  std::size_t flip = 0;
  std::size_t sign = 0;
  Complex global{1.0, 0.0};

  WordAction(const PauliWord& w, int m) {
    static const Complex powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    int ny = 0;
    for (int p = 0; p < static_cast<int>(w.ops.size()); ++p) {
      const int op = w.ops[static_cast<std::size_t>(p)];
      if (op == 0) continue;
      if (p >= m) throw std::invalid_argument("Pauli word exceeds register");
      const std::size_t bit = std::size_t{1} << bit_of(p, m);
      if (op == 1 || op == 2) flip |= bit;
      if (op == 2 || op == 3) sign |= bit;
      if (op == 2) ++ny;
    }
    global = powers[ny % 4];
  }

  [[nodiscard]] double sign_of(std::size_t j) const {
    return (std::popcount(j & sign) & 1) ? -1.0 : 1.0;
  }
};

// <v, P v>
template <class T>
Complex word_expectation(const T* v, std::size_t dim, const WordAction& w) {
  Complex acc = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    acc += Complex(std::conj(Complex(v[j ^ w.flip])) * Complex(v[j])) * w.sign_of(j);
  }
  return w.global * acc;
}

template <class T>
using ColVec = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <class T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <class T>
void apply_program(const GateProgram& program, T* v, std::size_t dim) {
  const int n = program.n_sites();
  const auto& ops = program.ops();
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    if (it->v < 0) {
      if constexpr (std::is_same_v<T, double>) {
        kernel_one(v, dim, bit_of(it->u, n), it->one.real().eval());
      } else {
        kernel_one(v, dim, bit_of(it->u, n), it->one);
      }
    } else {
      if constexpr (std::is_same_v<T, double>) {
        kernel_two(v, dim, bit_of(it->u, n), bit_of(it->v, n), it->two.real().eval());
      } else {
        kernel_two(v, dim, bit_of(it->u, n), bit_of(it->v, n), it->two);
      }
    }
  }
}

// Row-major block of basis-vector images: row j holds amplitude j of every
// vector in the batch, so each gate update is a short contiguous row loop.
template <class T>
void batch_two(T* v, std::size_t dim, std::size_t width, int bit_u, int bit_v, const auto& m) {
  const std::size_t mu = std::size_t{1} << bit_u;
  const std::size_t mv = std::size_t{1} << bit_v;
  const int lo = std::min(bit_u, bit_v);
  const int hi = std::max(bit_u, bit_v);
  for (std::size_t i = 0; i < dim / 4; ++i) {
    const std::size_t b = insert_zero_bit(insert_zero_bit(i, lo), hi);
    T* r[4] = {v + b * width, v + (b | mv) * width, v + (b | mu) * width,
               v + (b | mu | mv) * width};
    for (std::size_t k = 0; k < width; ++k) {
      const T a0 = r[0][k], a1 = r[1][k], a2 = r[2][k], a3 = r[3][k];
      for (int q = 0; q < 4; ++q) {
        r[q][k] = m(q, 0) * a0 + m(q, 1) * a1 + m(q, 2) * a2 + m(q, 3) * a3;
      }
    }
  }
}

template <class T>
void batch_one(T* v, std::size_t dim, std::size_t width, int bit, const auto& m) {
  const std::size_t mb = std::size_t{1} << bit;
  for (std::size_t i = 0; i < dim / 2; ++i) {
    const std::size_t b = insert_zero_bit(i, bit);
    T* r0 = v + b * width;
    T* r1 = v + (b | mb) * width;
    for (std::size_t k = 0; k < width; ++k) {
      const T a0 = r0[k], a1 = r1[k];
      r0[k] = m(0, 0) * a0 + m(0, 1) * a1;
      r1[k] = m(1, 0) * a0 + m(1, 1) * a1;
    }
  }
}

template <class T>
void apply_program_batch(const GateProgram& program, T* v, std::size_t dim, std::size_t width) {
  const int n = program.n_sites();
  const auto& ops = program.ops();
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    if (it->v < 0) {
      if constexpr (std::is_same_v<T, double>) {
        batch_one(v, dim, width, bit_of(it->u, n), it->one.real().eval());
      } else {
        batch_one(v, dim, width, bit_of(it->u, n), it->one);
      }
    } else {
      if constexpr (std::is_same_v<T, double>) {
        batch_two(v, dim, width, bit_of(it->u, n), bit_of(it->v, n), it->two.real().eval());
      } else {
        batch_two(v, dim, width, bit_of(it->u, n), bit_of(it->v, n), it->two);
      }
    }
  }
}

template <class T>
std::vector<Complex> trace_words_impl(const GateProgram& program,
                                      const std::vector<PauliWord>& words) {
  const int n = program.n_sites();
  const std::size_t dim = std::size_t{1} << n;
  int m = 0;
  for (const auto& w : words) m = std::max(m, w.support());
  if (m > n) throw std::invalid_argument("word supported outside the program volume");

  // Accumulating the reduced operator on the first m sites costs about 2^m
  // word evaluations per basis vector; use it when there are more words.
  const bool reduce = m <= 10 && words.size() > (std::size_t{1} << m);
  const std::size_t rdim = std::size_t{1} << m;

  std::vector<WordAction> actions;
  actions.reserve(words.size());
  for (const auto& w : words) actions.emplace_back(w, reduce ? m : n);

  // Basis vectors e_i, i in [first, first + width), are pushed through K
  // together; the trace only needs sums over i, so columns are never split.
  const std::size_t width = std::min<std::size_t>(dim, 64);
  std::vector<Complex> sums(words.size(), 0.0);
  RowMat<T> r = RowMat<T>::Zero(static_cast<Eigen::Index>(rdim), static_cast<Eigen::Index>(rdim));
  RowMat<T> block(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(width));
  for (std::size_t first = 0; first < dim; first += width) {
    block.setZero();
    for (std::size_t k = 0; k < width; ++k) {
      block(static_cast<Eigen::Index>(first + k), static_cast<Eigen::Index>(k)) = T(1);
    }
    apply_program_batch(program, block.data(), dim, width);
    if (reduce) {
      Eigen::Map<const RowMat<T>> vm(block.data(), static_cast<Eigen::Index>(rdim),
                                     static_cast<Eigen::Index>(dim / rdim * width));
      r.noalias() += vm * vm.adjoint();
    } else {
      for (std::size_t k = 0; k < words.size(); ++k) {
        const auto& a = actions[k];
        Complex acc = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
          const auto row_j = block.row(static_cast<Eigen::Index>(j));
          const auto row_f = block.row(static_cast<Eigen::Index>(j ^ a.flip));
          acc += Complex(row_f.dot(row_j)) * a.sign_of(j);
        }
        sums[k] += a.global * acc;
      }
    }
  }
  if (reduce) {
    for (std::size_t k = 0; k < words.size(); ++k) {
      const auto& a = actions[k];
      Complex acc = 0.0;
      for (std::size_t j = 0; j < rdim; ++j) {
        acc += Complex(r(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j ^ a.flip))) *
               a.sign_of(j);
      }
      sums[k] = a.global * acc;
    }
  }
  for (auto& s : sums) s /= static_cast<double>(dim);
  return sums;
}

// 4^2 Pauli-pair expansion of a two-site operator, embedded into n sites at
// positions (u, v) by explicit tensor products.
DenseOp embed_two_site(const Mat4& gate, int u, int v, int n) {
  DenseOp out = DenseOp::Zero(1 << n, 1 << n);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const Mat4 pp = kron_chain({pauli(a), pauli(b)});
      const Complex coeff = (pp.adjoint() * gate).trace() / 4.0;
      if (std::abs(coeff) == 0.0) continue;
      std::vector<Mat2> factors(static_cast<std::size_t>(n), pauli(0));
      factors[static_cast<std::size_t>(u)] = pauli(a);
      factors[static_cast<std::size_t>(v)] = pauli(b);
      out += coeff * kron_chain(factors);
    }
  }
  return out;
}

double field_distance(const BoundaryField& a, const BoundaryField& b) {
  return std::max(std::abs(a.h0 - b.h0), std::abs(a.h1 - b.h1));
}

void require_oracle_volume(int level) {
  if (level < 0) throw std::invalid_argument("volume level must be >= 0");
  const auto sites = volume_sizes(level, kTreeOrder).second;
  if (sites > static_cast<std::size_t>(kMaxOracleSites)) {
    throw std::invalid_argument("oracle volume Lambda_" + std::to_string(level) + " has " +
                                std::to_string(sites) + " sites, over the cap of " +
                                std::to_string(kMaxOracleSites));
  }
}

}  // namespace

BoundaryField sqrt_field(const BoundaryField& h) {
  if (!h.is_positive()) throw std::domain_error("field is not positive (need h0 > |h1|)");
  const double p = std::sqrt(h.h0 + h.h1);
  const double q = std::sqrt(h.h0 - h.h1);
  return {(p + q) / 2.0, (p - q) / 2.0};
}

int PauliWord::support() const {
  for (int p = static_cast<int>(ops.size()) - 1; p >= 0; --p) {
    if (ops[static_cast<std::size_t>(p)] != 0) return p + 1;
  }
  return 0;
}

std::string PauliWord::to_string() const {
  std::string s;
  for (int op : ops) s += static_cast<char>('0' + op);
  return s.empty() ? "0" : s;
}

PauliWord PauliWord::single(const TreeCoord& site, int index) {
  if (index < 0 || index > 3) throw std::out_of_range("Pauli index not in 0..3");
  PauliWord w;
  const auto pos = volume_index(site, kTreeOrder);
  w.ops.assign(pos + 1, 0);
  w.ops[pos] = index;
  return w;
}

std::vector<PauliWord> PauliWord::all_on_prefix(int m) {
  if (m < 0 || m > 8) throw std::invalid_argument("prefix length must be in 0..8");
  const std::size_t count = std::size_t{1} << (2 * m);
  std::vector<PauliWord> out(count);
  for (std::size_t w = 0; w < count; ++w) {
    out[w].ops.resize(static_cast<std::size_t>(m));
    for (int p = 0; p < m; ++p) {
      out[w].ops[static_cast<std::size_t>(p)] = static_cast<int>((w >> (2 * (m - 1 - p))) & 3U);
    }
  }
  return out;
}

SiteState SiteState::basis(int n_sites, std::size_t index) {
  if (n_sites < 1 || n_sites > kMaxOracleSites) throw std::invalid_argument("site count outside 1..16");
  SiteState s;
  s.n_sites = n_sites;
  s.amplitudes = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_sites);
  if (index >= static_cast<std::size_t>(s.amplitudes.size())) throw std::out_of_range("basis index");
  s.amplitudes(static_cast<Eigen::Index>(index)) = 1.0;
  return s;
}

void apply_gate(SiteState& state, int u, int v, const Mat4& gate) {
  if (u < 0 || u >= state.n_sites || v < 0 || v >= state.n_sites) {
    throw std::out_of_range("apply_gate: site outside the state");
  }
  if (u == v) throw std::invalid_argument("apply_gate: sites must differ");
  kernel_two(state.amplitudes.data(), static_cast<std::size_t>(state.amplitudes.size()),
             bit_of(u, state.n_sites), bit_of(v, state.n_sites), gate);
}

void apply_gate(SiteState& state, int u, const Mat2& gate) {
  if (u < 0 || u >= state.n_sites) throw std::out_of_range("apply_gate: site outside the state");
  kernel_one(state.amplitudes.data(), static_cast<std::size_t>(state.amplitudes.size()),
             bit_of(u, state.n_sites), gate);
}

const BoundaryField& BoundaryCondition::h_at(int level) const {
  if (h_by_level.empty()) throw std::logic_error("boundary condition has no fields");
  const auto i = std::min(static_cast<std::size_t>(std::max(level, 0)), h_by_level.size() - 1);
  return h_by_level[i];
}

BoundaryCondition BoundaryCondition::alpha0(double beta) {
  const auto a = alpha_field(beta);
  return {"alpha0", {1.0 / a.h0, 0.0}, {a}};
}

BoundaryCondition BoundaryCondition::gamma(double beta) {
  const auto g = gamma_field(beta);
  return {"gamma", {1.0 / g.h0, 0.0}, {g}};
}

BoundaryCondition BoundaryCondition::alpha_family(double beta, double alpha, int max_level) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  const double c3 = std::pow(std::cosh(beta), 3);
  BoundaryCondition bc{"alpha=" + std::to_string(alpha), {1.0 / alpha, 0.0}, {}};
  double root = alpha * c3;
  for (int level = 0; level <= max_level; ++level) {
    bc.h_by_level.push_back({root / c3, 0.0});
    root = std::cbrt(root);
  }
  return bc;
}

GateProgram GateProgram::build(int n, double beta, const BoundaryCondition& bc) {
  require_oracle_volume(n);
  GateProgram prog;
  prog.n_ = n;
  for (int level = 0; level <= n; ++level) {
    for (auto& x : level_set(level, kTreeOrder).vertices) {
      prog.index_.emplace(x, static_cast<int>(prog.sites_.size()));
      prog.sites_.push_back(std::move(x));
    }
  }

  auto one_site = [](int u, const BoundaryField& f) {
    Op op;
    op.u = u;
    op.one = sqrt_field(f).matrix();
    return op;
  };
  prog.ops_.push_back(one_site(0, bc.w0));
  const Mat4 k = edge_gate(beta).matrix();
  for (int m = 1; m <= n; ++m) {
    for (const auto& x : level_set(m - 1, kTreeOrder).vertices) {
      for (const auto& y : successors(x, kTreeOrder)) {
        Op op;
        op.u = prog.site_index(x);
        op.v = prog.site_index(y);
        op.two = k;
        prog.ops_.push_back(op);
      }
    }
  }
  for (const auto& x : level_set(n, kTreeOrder).vertices) {
    prog.ops_.push_back(one_site(prog.site_index(x), bc.h_at(n)));
  }
  return prog;
}

int GateProgram::site_index(const TreeCoord& x) const {
  auto it = index_.find(x);
  if (it == index_.end()) throw std::out_of_range("site " + x.to_string() + " not in the volume");
  return it->second;
}

bool GateProgram::is_real() const {
  return std::all_of(ops_.begin(), ops_.end(), [](const Op& op) {
    return op.v < 0 ? op.one.imag().isZero(0.0) : op.two.imag().isZero(0.0);
  });
}

void GateProgram::apply(SiteState& state) const {
  if (state.n_sites != n_sites()) throw std::invalid_argument("state and program volumes differ");
  apply_program(*this, state.amplitudes.data(), static_cast<std::size_t>(state.amplitudes.size()));
}

std::vector<Complex> trace_words(const GateProgram& program, const std::vector<PauliWord>& words) {
  if (program.is_real()) return trace_words_impl<double>(program, words);
  return trace_words_impl<Complex>(program, words);
}

Complex trace_word_in_basis(const GateProgram& program, const PauliWord& word,
                            const Eigen::MatrixXcd& basis) {
  const std::size_t dim = std::size_t{1} << program.n_sites();
  if (static_cast<std::size_t>(basis.rows()) != dim || basis.cols() != basis.rows()) {
    throw std::invalid_argument("basis has the wrong shape");
  }
  const WordAction action(word, program.n_sites());
  Complex acc = 0.0;
  SiteState s;
  s.n_sites = program.n_sites();
  for (Eigen::Index k = 0; k < basis.cols(); ++k) {
    s.amplitudes = basis.col(k);
    program.apply(s);
    acc += word_expectation(s.amplitudes.data(), dim, action);
  }
  return acc / static_cast<double>(dim);
}

std::vector<double> finite_volume_expectations(const std::vector<PauliWord>& words, int n,
                                               double beta, const BoundaryCondition& bc,
                                               StateForm form) {
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  const int volume = form == StateForm::Definition ? n + 1 : n;
  require_oracle_volume(volume);
  const auto lambda_n = static_cast<int>(volume_sizes(n, kTreeOrder).second);
  for (const auto& w : words) {
    if (w.support() > lambda_n) {
      throw std::invalid_argument("observable " + w.to_string() + " not supported on Lambda_" +
                                  std::to_string(n));
    }
  }
  const auto program = GateProgram::build(volume, beta, bc);
  const auto values = trace_words(program, words);
  std::vector<double> out;
  out.reserve(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (std::abs(values[k].imag()) > kImagTol) {
      std::ostringstream os;
      os << "expectation of hermitian word " << words[k].to_string() << " has imaginary part "
         << values[k].imag();
      throw std::runtime_error(os.str());
    }
    out.push_back(values[k].real());
  }
  return out;
}

double finite_volume_expectation(const PauliWord& word, int n, double beta,
                                 const BoundaryCondition& bc, StateForm form) {
  return finite_volume_expectations({word}, n, beta, bc, form).front();
}

Complex finite_volume_expectation(const Observable& a, int n, double beta,
                                  const BoundaryCondition& bc, StateForm form) {
  std::vector<PauliWord> words;
  words.reserve(a.size());
  for (const auto& term : a) words.push_back(term.second);
  const auto values = finite_volume_expectations(words, n, beta, bc, form);
  Complex acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k].first * values[k];
  return acc;
}

PauliWord sigma1_observable(int level) {
  if (level < 1) throw std::invalid_argument("sigma_1 observable needs level >= 1");
  return PauliWord::single(TreeCoord(std::vector<int>(static_cast<std::size_t>(level), 1), kTreeOrder), 1);
}

BoundaryField dense_vertex_trace(double beta, const BoundaryField& a, const BoundaryField& b,
                                 const BoundaryField& c, bool insert_sigma1) {
  const Mat4 k = edge_gate(beta).matrix();
  const DenseOp k1 = embed_two_site(k, 0, 1, 4);
  const DenseOp k2 = embed_two_site(k, 0, 2, 4);
  const DenseOp k3 = embed_two_site(k, 0, 3, 4);
  const DenseOp hhh = kron_chain({pauli(0), a.matrix(), b.matrix(), c.matrix()});
  DenseOp m = k1 * k2 * k3 * hhh * k3 * k2 * k1;
  if (insert_sigma1) m = m * kron_chain({pauli(0), pauli(1), pauli(0), pauli(0)});
  const int sites[] = {0, 1, 2, 3};
  const int keep[] = {0};
  const DenseOp reduced = normalized_partial_trace(m, sites, keep);
  const auto pv = PauliVector::from_matrix(reduced);
  return {pv.c[0].real(), pv.c[1].real()};
}

Eq2Check verify_eq2(double beta, const BoundaryField& h) {
  const Mat4 k = edge_gate(beta).matrix();
  const DenseOp k1 = embed_two_site(k, 0, 1, 4);
  const DenseOp k2 = embed_two_site(k, 0, 2, 4);
  const DenseOp k3 = embed_two_site(k, 0, 3, 4);
  const DenseOp hhh = kron_chain({pauli(0), h.matrix(), h.matrix(), h.matrix()});
  const DenseOp m = k1 * k2 * k3 * hhh * k3 * k2 * k1;
  const int sites[] = {0, 1, 2, 3};
  const int keep[] = {0};
  const auto pv = PauliVector::from_matrix(normalized_partial_trace(m, sites, keep));

  Eq2Check out;
  out.contraction = {pv.c[0].real(), pv.c[1].real()};
  out.off_span = std::max({std::abs(pv.c[2]), std::abs(pv.c[3]), std::abs(pv.c[0].imag()),
                           std::abs(pv.c[1].imag())});
  out.residual_vs_input = std::max(field_distance(out.contraction, h), out.off_span);
  out.residual_vs_transfer =
      std::max(field_distance(out.contraction, transfer_three(h, h, h, beta)), out.off_span);
  return out;
}

ExtractedCoeffs verify_mainsystem_coeffs(double beta) {
  // With all three fields equal to (x, y) the trace is
  // (B2 x^3 + A2 x y^2, B1 x^2 y + A1 y^3).
  const auto p10 = verify_eq2(beta, {1.0, 0.0}).contraction;
  const auto p11 = verify_eq2(beta, {1.0, 1.0}).contraction;
  const auto p1h = verify_eq2(beta, {1.0, 0.5}).contraction;
  ExtractedCoeffs out;
  out.b2 = p10.h0;
  out.a2 = p11.h0 - out.b2;
  out.a1 = 4.0 * (p11.h1 - 2.0 * p1h.h1) / 3.0;
  out.b1 = p11.h1 - out.a1;
  if (std::abs(out.b1 - out.b2) >= 1e-14) out.d = (out.a2 - out.a1) / (out.b1 - out.b2);

  const auto rc = recursion_coeffs(beta);
  out.max_deviation = std::max({std::abs(out.a1 - rc.a1), std::abs(out.b1 - rc.b1),
                                std::abs(out.a2 - rc.a2), std::abs(out.b2 - rc.b2),
                                // The (1, 1/2) probe's sigma_0 part is not used above.
                                std::abs(p1h.h0 - (out.b2 + out.a2 / 4.0)),
                                std::abs(p10.h1)});
  return out;
}

std::pair<double, double> boundary_residuals(double beta, const BoundaryCondition& bc,
                                             int max_level) {
  const auto& root = bc.h_at(0);
  const double eq1 = std::abs(bc.w0.h0 * root.h0 + bc.w0.h1 * root.h1 - 1.0);
  double eq2 = 0.0;
  for (int level = 0; level < max_level; ++level) {
    const auto& next = bc.h_at(level + 1);
    const auto got = dense_vertex_trace(beta, next, next, next, false);
    eq2 = std::max(eq2, field_distance(got, bc.h_at(level)));
  }
  return {eq1, eq2};
}

CompatibilityReport verify_compatibility(double beta, const BoundaryCondition& bc, int n,
                                         std::uint64_t seed) {
  if (n != 0 && n != 1) throw std::invalid_argument("compatibility is checked for n = 0 or 1 only");
  CompatibilityReport rep;
  rep.seed = seed;
  std::tie(rep.eq1_residual, rep.eq2_residual) = boundary_residuals(beta, bc, n + 2);
  rep.boundary_valid = rep.eq1_residual < kBoundaryTol && rep.eq2_residual < kBoundaryTol;

  std::vector<double> lhs, rhs;
  std::vector<PauliWord> words;
  if (n == 0) {
    words = PauliWord::all_on_prefix(1);
    lhs = finite_volume_expectations(words, 1, beta, bc, StateForm::Definition);
    rhs = finite_volume_expectations(words, 0, beta, bc, StateForm::Definition);
  } else {
    auto all = PauliWord::all_on_prefix(4);
    std::mt19937_64 rng(seed);
    const std::size_t sample = 64;
    for (std::size_t i = 0; i < sample; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng() % (all.size() - i));
      std::swap(all[i], all[j]);
    }
    words.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(sample));
    lhs = finite_volume_expectations(words, 2, beta, bc, StateForm::Reduced);
    rhs = finite_volume_expectations(words, 1, beta, bc, StateForm::Definition);
  }
  for (std::size_t k = 0; k < words.size(); ++k) {
    rep.deviation = std::max(rep.deviation, std::abs(lhs[k] - rhs[k]));
  }
  rep.words_checked = words.size();
  return rep;
}

double verify_alpha_family_invariance(double beta, const std::vector<double>& alphas, int n) {
  if (in_window(beta)) throw std::domain_error("alpha family is checked outside the window only");
  if (n < 0 || n > 1) throw std::invalid_argument("alpha family is checked for n <= 1");
  const auto lambda_n = static_cast<int>(volume_sizes(n, kTreeOrder).second);
  const auto words = PauliWord::all_on_prefix(lambda_n);
  std::vector<std::vector<double>> values;
  for (double a : alphas) {
    values.push_back(finite_volume_expectations(
        words, n, beta, BoundaryCondition::alpha_family(beta, a, n + 1), StateForm::Definition));
  }
  double dev = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      for (std::size_t k = 0; k < words.size(); ++k) {
        dev = std::max(dev, std::abs(values[i][k] - values[j][k]));
      }
    }
  }
  return dev;
}

double verify_wn_form(double beta, const BoundaryCondition& bc, int n) {
  if (n < 0 || n > 1) throw std::invalid_argument("W_n form is checked for n <= 1");
  const auto lambda_n = static_cast<int>(volume_sizes(n, kTreeOrder).second);
  const auto words = PauliWord::all_on_prefix(lambda_n);
  const auto def = finite_volume_expectations(words, n, beta, bc, StateForm::Definition);
  const auto red = finite_volume_expectations(words, n, beta, bc, StateForm::Reduced);
  double dev = 0.0;
  for (std::size_t k = 0; k < words.size(); ++k) dev = std::max(dev, std::abs(def[k] - red[k]));
  return dev;
}

}  // namespace qmc
