#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qnlat/error.hpp"

namespace qnlat {

enum class Comparison { LessThan, GreaterThan, Equal, Incomparable };

inline bool label_char_ok(char c) {
  // printable, non-whitespace, and not part of the file syntax
  unsigned char u = static_cast<unsigned char>(c);
  if (u <= 0x20 || u >= 0x7f) return false;
  switch (c) {
    case '=':
    case ',':
    case ';':
    case '%':
    case '\\':
      return false;
    default:
      return true;
  }
}

/// Finite poset over single-character element labels. The strict order is the
/// transitive closure of the edge pairs given at construction; ids follow
/// label declaration order. Immutable once built.
class Poset {
 public:
  static constexpr int kMaxElements = 64;

  static Poset build(std::string_view labels,
                     const std::vector<std::pair<char, char>>& edges,
                     int line = 0) {
    Poset p;
    if (labels.empty())
      throw Error(ErrorCode::InvalidLabel, "empty element list", line);
    if (labels.size() > kMaxElements)
      throw Error(ErrorCode::TooManyElements,
                  "more than " + std::to_string(kMaxElements) + " elements",
                  line);
    p.labels_.assign(labels.begin(), labels.end());
    p.id_of_.fill(-1);
    for (int i = 0; i < static_cast<int>(p.labels_.size()); ++i) {
      char c = p.labels_[i];
      if (!label_char_ok(c))
        throw Error(ErrorCode::InvalidLabel,
                    std::string("label '") + c + "' not allowed", line);
      if (p.id_of_[static_cast<unsigned char>(c)] != -1)
        throw Error(ErrorCode::DuplicateLabel,
                    std::string("label '") + c + "' declared twice", line);
      p.id_of_[static_cast<unsigned char>(c)] = i;
    }
    int n = p.size();
    p.up_.assign(n, 0);
    p.down_.assign(n, 0);
    for (auto [a, b] : edges) {
      int x = p.id_of_[static_cast<unsigned char>(a)];
      int y = p.id_of_[static_cast<unsigned char>(b)];
      if (x < 0)
        throw Error(ErrorCode::UnknownLabel,
                    std::string("edge uses undeclared label '") + a + "'",
                    line);
      if (y < 0)
        throw Error(ErrorCode::UnknownLabel,
                    std::string("edge uses undeclared label '") + b + "'",
                    line);
      p.up_[x] |= bit(y);
    }
    p.close_transitively();
    for (int i = 0; i < n; ++i)
      if (p.up_[i] & bit(i))
        throw Error(ErrorCode::CycleDetected,
                    std::string("element '") + p.labels_[i] +
                        "' lies on an order cycle",
                    line);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (p.up_[j] & bit(i)) p.down_[i] |= bit(j);
    return p;
  }

  int size() const { return static_cast<int>(labels_.size()); }
  char label(int id) const { return labels_[id]; }
  const std::string& labels() const { return labels_; }

  std::optional<int> find(char label) const {
    int id = id_of_[static_cast<unsigned char>(label)];
    if (id < 0) return std::nullopt;
    return id;
  }

  bool less(int x, int y) const { return (up_[x] >> y) & 1u; }
  bool leq(int x, int y) const { return x == y || less(x, y); }

  Comparison compare(int x, int y) const {
    if (x == y) return Comparison::Equal;
    if (less(x, y)) return Comparison::LessThan;
    if (less(y, x)) return Comparison::GreaterThan;
    return Comparison::Incomparable;
  }

  bool comparable(int x, int y) const {
    return compare(x, y) != Comparison::Incomparable;
  }

  /// Strict upper/lower sets as bit masks over element ids.
  uint64_t strictly_above(int x) const { return up_[x]; }
  uint64_t strictly_below(int x) const { return down_[x]; }
  /// Principal filter/ideal masks (include x itself).
  uint64_t filter_mask(int x) const { return up_[x] | bit(x); }
  uint64_t ideal_mask(int x) const { return down_[x] | bit(x); }

  uint64_t upper_bounds(int x, int y) const {
    return filter_mask(x) & filter_mask(y);
  }
  uint64_t lower_bounds(int x, int y) const {
    return ideal_mask(x) & ideal_mask(y);
  }

  std::optional<int> least_upper_bound(int x, int y) const {
    return extreme(upper_bounds(x, y), /*least=*/true);
  }

  std::optional<int> greatest_lower_bound(int x, int y) const {
    return extreme(lower_bounds(x, y), /*least=*/false);
  }

  /// True when `other` has the same labels and exactly the same strict order.
  bool same_order(const Poset& other) const {
    return labels_ == other.labels_ && up_ == other.up_;
  }

  /// Edge list x<y in id order; every comparable pair, not just covers.
  std::vector<std::pair<char, char>> relation_pairs() const {
    std::vector<std::pair<char, char>> out;
    for (int i = 0; i < size(); ++i)
      for (int j = 0; j < size(); ++j)
        if (less(i, j)) out.emplace_back(labels_[i], labels_[j]);
    return out;
  }

  /// Cover pairs x -< y (no element strictly between).
  std::vector<std::pair<int, int>> cover_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < size(); ++i)
      for (int j = 0; j < size(); ++j)
        if (less(i, j) && !(up_[i] & down_[j])) out.emplace_back(i, j);
    return out;
  }

  static uint64_t bit(int i) { return uint64_t{1} << i; }

 private:
  Poset() = default;

  void close_transitively() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int i = 0; i < size(); ++i) {
        uint64_t reach = up_[i];
        uint64_t rest = reach;
        while (rest) {
          int j = __builtin_ctzll(rest);
          rest &= rest - 1;
          reach |= up_[j];
        }
        if (reach != up_[i]) {
          up_[i] = reach;
          changed = true;
        }
      }
    }
  }

  // minimum (least=true) or maximum of the elements in `mask`, if unique
  std::optional<int> extreme(uint64_t mask, bool least) const {
    if (!mask) return std::nullopt;
    uint64_t rest = mask;
    while (rest) {
      int m = __builtin_ctzll(rest);
      rest &= rest - 1;
      uint64_t covers = least ? filter_mask(m) : ideal_mask(m);
      if ((mask & ~covers) == 0) return m;
    }
    return std::nullopt;
  }

  std::string labels_;
  std::array<int, 256> id_of_{};
  std::vector<uint64_t> up_;
  std::vector<uint64_t> down_;
};

}  // namespace qnlat
