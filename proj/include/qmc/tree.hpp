#pragma once

// Semi-infinite Cayley tree of order k. A vertex is the digit path from the
// root; the root is the empty path.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace qmc {

class TreeCoord {
 public:
  TreeCoord() = default;
  // Throws std::invalid_argument if any digit is outside 1..k.
  TreeCoord(std::vector<int> digits, int k);

  static TreeCoord root() { return {}; }

  [[nodiscard]] int level() const { return static_cast<int>(digits_.size()); }
  [[nodiscard]] const std::vector<int>& digits() const { return digits_; }
  [[nodiscard]] bool is_root() const { return digits_.empty(); }

  // Throws std::logic_error on the root.
  [[nodiscard]] TreeCoord parent() const;
  [[nodiscard]] TreeCoord child(int digit) const;

  // "()" for the root, "(1,2,3)" otherwise.
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const TreeCoord&, const TreeCoord&) = default;
  friend auto operator<=>(const TreeCoord& a, const TreeCoord& b) {
    if (a.level() != b.level()) return a.level() <=> b.level();
    return a.digits_ <=> b.digits_;
  }

 private:
  std::vector<int> digits_;
};

/// (x,1), ..., (x,k) in forward order.
std::vector<TreeCoord> successors(const TreeCoord& x, int k);

struct LevelSet {
  int n = 0;
  int k = 0;
  std::vector<TreeCoord> vertices;
};

/// All k^n vertices at distance n, in forward (lexicographic) order.
/// Throws std::invalid_argument when n exceeds max_level, to keep
/// materialization bounded.
LevelSet level_set(int n, int k, int max_level = 8);

/// (|W_n|, |Lambda_n|) = (k^n, (k^{n+1} - 1)/(k - 1)).
std::pair<std::size_t, std::size_t> volume_sizes(int n, int k);

/// Position of x within its level in forward order, and its inverse.
std::size_t flat_index(const TreeCoord& x, int k);
TreeCoord from_flat_index(std::size_t index, int level, int k);

/// Position of x in Lambda_n listed level by level (root = 0).
std::size_t volume_index(const TreeCoord& x, int k);

}  // namespace qmc
