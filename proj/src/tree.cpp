#include "qmc/tree.hpp"

#include <stdexcept>

namespace qmc {

namespace {

std::size_t ipow(std::size_t base, int exp) {
  std::size_t out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

void check_order(int k) {
  if (k < 1) throw std::invalid_argument("tree order k must be >= 1");
}

}  // namespace

TreeCoord::TreeCoord(std::vector<int> digits, int k) : digits_(std::move(digits)) {
  check_order(k);
  for (int d : digits_) {
    if (d < 1 || d > k) {
      throw std::invalid_argument("tree digit " + std::to_string(d) + " outside 1.." +
                                  std::to_string(k));
    }
  }
}

TreeCoord TreeCoord::parent() const {
  if (is_root()) throw std::logic_error("root has no parent");
  TreeCoord p;
  p.digits_.assign(digits_.begin(), digits_.end() - 1);
  return p;
}

TreeCoord TreeCoord::child(int digit) const {
  if (digit < 1) throw std::invalid_argument("child digit must be >= 1");
  TreeCoord c = *this;
  c.digits_.push_back(digit);
  return c;
}

std::string TreeCoord::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(digits_[i]);
  }
  return s + ")";
}

std::vector<TreeCoord> successors(const TreeCoord& x, int k) {
  check_order(k);
  std::vector<TreeCoord> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int d = 1; d <= k; ++d) out.push_back(x.child(d));
  return out;
}

LevelSet level_set(int n, int k, int max_level) {
  check_order(k);
  if (n < 0) throw std::invalid_argument("level must be >= 0");
  if (n > max_level) {
    throw std::invalid_argument("level " + std::to_string(n) + " exceeds materialization cap " +
                                std::to_string(max_level));
  }
  LevelSet ls{n, k, {TreeCoord::root()}};
  for (int level = 0; level < n; ++level) {
    std::vector<TreeCoord> next;
    next.reserve(ls.vertices.size() * static_cast<std::size_t>(k));
    for (const auto& x : ls.vertices) {
      for (auto& y : successors(x, k)) next.push_back(std::move(y));
    }
    ls.vertices = std::move(next);
  }
  return ls;
}

std::pair<std::size_t, std::size_t> volume_sizes(int n, int k) {
  check_order(k);
  if (n < 0) throw std::invalid_argument("level must be >= 0");
  std::size_t total = 0;
  for (int m = 0; m <= n; ++m) total += ipow(static_cast<std::size_t>(k), m);
  return {ipow(static_cast<std::size_t>(k), n), total};
}

std::size_t flat_index(const TreeCoord& x, int k) {
  check_order(k);
  std::size_t idx = 0;
  for (int d : x.digits()) {
    if (d > k) throw std::invalid_argument("digit exceeds tree order");
    idx = idx * static_cast<std::size_t>(k) + static_cast<std::size_t>(d - 1);
  }
  return idx;
}

TreeCoord from_flat_index(std::size_t index, int level, int k) {
  check_order(k);
  if (level < 0) throw std::invalid_argument("level must be >= 0");
  const auto kk = static_cast<std::size_t>(k);
  if (index >= ipow(kk, level)) throw std::out_of_range("flat index outside level");
  std::vector<int> digits(static_cast<std::size_t>(level));
  for (int i = level - 1; i >= 0; --i) {
    digits[static_cast<std::size_t>(i)] = static_cast<int>(index % kk) + 1;
    index /= kk;
  }
  return TreeCoord(std::move(digits), k);
}

std::size_t volume_index(const TreeCoord& x, int k) {
  const std::size_t below = x.level() == 0 ? 0 : volume_sizes(x.level() - 1, k).second;
  return below + flat_index(x, k);
}

}  // namespace qmc
