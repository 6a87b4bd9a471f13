#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qnlat/constraints.hpp"
#include "qnlat/error.hpp"
#include "qnlat/poset.hpp"

namespace qnlat {

/// A stored operation-table entry; operands satisfy x < y in id order and are
/// incomparable in the poset.
struct TableEntry {
  int x;
  int y;
  int z;

  friend bool operator==(const TableEntry& a, const TableEntry& b) {
    return a.x == b.x && a.y == b.y && a.z == b.z;
  }
  friend bool operator<(const TableEntry& a, const TableEntry& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.z < b.z;
  }
};

struct AxiomViolation {
  char axiom;  // '1', '4', '5'
  std::string detail;
};

/// Poset plus partial join/meet tables over incomparable pairs, closed under
/// the qn-lattice axioms. Comparable pairs are never stored; their join and
/// meet resolve to max and min on lookup. Immutable.
class QnLattice {
 public:
  /// Least closure of `constraints` over `poset`. The result is the unique
  /// least fixed point, independent of processing order; `order_seed`
  /// randomizes the worklist order and exists so tests can exercise that.
  static QnLattice close(const Poset& poset, const ConstraintSet& constraints,
                         std::optional<uint64_t> order_seed = std::nullopt);

  /// Builds a lattice with the given tables as-is, skipping closure. Meant
  /// for tests and diagnostics; assert_axioms reports what is missing.
  static QnLattice unchecked(const Poset& poset,
                             const std::vector<TableEntry>& join,
                             const std::vector<TableEntry>& meet) {
    QnLattice q(poset);
    for (const TableEntry& e : join) q.store(OpKind::Join, e.x, e.y, e.z);
    for (const TableEntry& e : meet) q.store(OpKind::Meet, e.x, e.y, e.z);
    q.sort_entries();
    return q;
  }

  const Poset& poset() const { return poset_; }
  int size() const { return poset_.size(); }

  const std::vector<TableEntry>& entries(OpKind k) const {
    return k == OpKind::Join ? join_entries_ : meet_entries_;
  }

  /// Total-on-comparable-pairs lookup: comparable pairs resolve by A2 to
  /// max (join) or min (meet); incomparable pairs through the table.
  std::optional<int> op_lookup(OpKind k, int x, int y) const {
    switch (poset_.compare(x, y)) {
      case Comparison::Equal:
        return x;
      case Comparison::LessThan:
        return k == OpKind::Join ? y : x;
      case Comparison::GreaterThan:
        return k == OpKind::Join ? x : y;
      case Comparison::Incomparable:
        break;
    }
    int z = table(k)[cell(x, y)];
    if (z < 0) return std::nullopt;
    return z;
  }

  bool same_tables(const QnLattice& other) const {
    return join_entries_ == other.join_entries_ &&
           meet_entries_ == other.meet_entries_;
  }

  /// Re-expresses the stored tables as a constraint set (used by the
  /// idempotence property and by tests).
  ConstraintSet as_constraints() const {
    ConstraintSet out;
    for (const TableEntry& e : join_entries_)
      out.push_back(JmConstraint::join(e.x, e.y, e.z));
    for (const TableEntry& e : meet_entries_)
      out.push_back(JmConstraint::meet(e.x, e.y, e.z));
    return out;
  }

  /// Exhaustive axiom audit. A2 and A3 hold by representation; A4 and A5 are
  /// checked through op_lookup over all element triples, so comparable pairs
  /// participate as premises exactly as in the closure. A1 is the strict
  /// supremum/infimum condition on the stored entries: close() leaves it
  /// intact whenever the input order harmonizes with the constraints, but an
  /// input with deliberately omitted edges will show A1 findings here.
  std::vector<AxiomViolation> assert_axioms() const {
    std::vector<AxiomViolation> out;
    int n = size();
    for (OpKind k : {OpKind::Join, OpKind::Meet}) {
      bool join = k == OpKind::Join;
      for (const TableEntry& e : entries(k)) {
        auto bound = join ? poset_.least_upper_bound(e.x, e.y)
                          : poset_.greatest_lower_bound(e.x, e.y);
        if (!bound || *bound != e.z)
          out.push_back({'1', describe(k, e.x, e.y) + "=" +
                                  std::string(1, poset_.label(e.z)) +
                                  (join ? " is not the supremum"
                                        : " is not the infimum")});
      }
      // A4: x op y = z, z op u = v, y <= u (join) / u <= y (meet)
      //     forces x op u = v
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          if (x == y) continue;
          auto z = op_lookup(k, x, y);
          if (!z) continue;
          for (int u = 0; u < n; ++u) {
            bool cond = join ? poset_.leq(y, u) : poset_.leq(u, y);
            if (!cond) continue;
            auto v = op_lookup(k, *z, u);
            if (!v) continue;
            auto got = op_lookup(k, x, u);
            if (!got || *got != *v)
              out.push_back({'4', describe(k, x, u) + " should be " +
                                      std::string(1, poset_.label(*v))});
          }
          // A5: u between x and z forces u op y = z
          uint64_t between = join
              ? (poset_.filter_mask(x) & poset_.ideal_mask(*z))
              : (poset_.ideal_mask(x) & poset_.filter_mask(*z));
          uint64_t rest = between;
          while (rest) {
            int u = __builtin_ctzll(rest);
            rest &= rest - 1;
            auto got = op_lookup(k, u, y);
            if (!got || *got != *z)
              out.push_back({'5', describe(k, u, y) + " should be " +
                                      std::string(1, poset_.label(*z))});
          }
        }
    }
    return out;
  }

 private:
  explicit QnLattice(const Poset& p)
      : poset_(p),
        join_table_(static_cast<size_t>(p.size()) * p.size(), -1),
        meet_table_(static_cast<size_t>(p.size()) * p.size(), -1) {}

  friend class Builder;
  class Builder;

  size_t cell(int x, int y) const {
    return static_cast<size_t>(x) * poset_.size() + y;
  }

  std::vector<int8_t>& table(OpKind k) {
    return k == OpKind::Join ? join_table_ : meet_table_;
  }
  const std::vector<int8_t>& table(OpKind k) const {
    return k == OpKind::Join ? join_table_ : meet_table_;
  }

  void store(OpKind k, int x, int y, int z) {
    auto& t = table(k);
    t[cell(x, y)] = static_cast<int8_t>(z);
    t[cell(y, x)] = static_cast<int8_t>(z);
    auto& es = k == OpKind::Join ? join_entries_ : meet_entries_;
    es.push_back({std::min(x, y), std::max(x, y), z});
  }

  void sort_entries() {
    std::sort(join_entries_.begin(), join_entries_.end());
    std::sort(meet_entries_.begin(), meet_entries_.end());
  }

  static std::array<std::pair<int, int>, 2> orientations(const TableEntry& e) {
    return {{{e.x, e.y}, {e.y, e.x}}};
  }

  std::string describe(OpKind k, int x, int y) const {
    std::string s;
    s += poset_.label(x);
    s += op_symbol(k);
    s += poset_.label(y);
    return s;
  }

  Poset poset_;
  std::vector<int8_t> join_table_;
  std::vector<int8_t> meet_table_;
  std::vector<TableEntry> join_entries_;
  std::vector<TableEntry> meet_entries_;
};

/// Worklist closure under A1-A5. Entries pair only with entries of the same
/// operation; every new entry is checked against A1 before it is stored.
class QnLattice::Builder {
 public:
  explicit Builder(const Poset& p) : q_(p) {}

  void add(OpKind k, int x, int y, int z) {
    const Poset& p = q_.poset_;
    if (x == y || p.comparable(x, y)) {
      // A2 pair: the value is forced to max/min and nothing is stored
      int forced;
      if (x == y) {
        forced = x;
      } else {
        bool xless = p.less(x, y);
        forced = (k == OpKind::Join) == xless ? y : x;
      }
      if (z != forced)
        throw derived_error(k, x, y, z, "contradicts the order");
      return;
    }
    int existing = q_.table(k)[q_.cell(x, y)];
    if (existing == z) return;
    if (existing >= 0)
      throw Error(ErrorCode::DerivedConflict,
                  q_.describe(k, x, y) + " forced to both '" +
                      std::string(1, p.label(existing)) + "' and '" +
                      std::string(1, p.label(z)) + "'");
    q_.store(k, x, y, z);
    pending_.push_back({k, x, y, z});
  }

  void run(std::optional<uint64_t> order_seed) {
    std::mt19937_64 rng(order_seed.value_or(0));
    while (!pending_.empty()) {
      size_t pick = 0;
      if (order_seed) {
        pick = std::uniform_int_distribution<size_t>(0, pending_.size() - 1)(
            rng);
      }
      Item e = pending_[pick];
      pending_[pick] = pending_.back();
      pending_.pop_back();
      fire(e);
    }
    q_.sort_entries();
  }

  QnLattice take() { return std::move(q_); }

 private:
  struct Item {
    OpKind kind;
    int x, y, z;
  };

  Error derived_error(OpKind k, int x, int y, int z, const char* why) {
    ErrorCode code = k == OpKind::Join ? ErrorCode::DerivedNotSupremum
                                       : ErrorCode::DerivedNotInfimum;
    return Error(code, q_.describe(k, x, y) + "=" +
                           std::string(1, q_.poset_.label(z)) + " " + why);
  }

  void fire(const Item& e) {
    const Poset& p = q_.poset_;
    OpKind k = e.kind;
    bool join = k == OpKind::Join;
    TableEntry self{std::min(e.x, e.y), std::max(e.x, e.y), e.z};

    // A4 with e and a stored partner as the two premises. The partner list
    // grows while we iterate, but new entries land in the worklist and fire
    // later themselves.
    size_t count = q_.entries(k).size();
    for (size_t i = 0; i < count; ++i) {
      TableEntry f = q_.entries(k)[i];
      // e: x op y = z as the first premise, f: z op u = v as the second
      for (auto [x, y] : orientations(self))
        for (auto [fz, u] : orientations(f)) {
          if (fz != self.z) continue;
          bool cond = join ? p.leq(y, u) : p.leq(u, y);
          if (cond) add(k, x, u, f.z);
        }
      // f as the first premise, e as the second
      for (auto [x, y] : orientations(f))
        for (auto [ez, u] : orientations(self)) {
          if (ez != f.z) continue;
          bool cond = join ? p.leq(y, u) : p.leq(u, y);
          if (cond) add(k, x, u, self.z);
        }
    }

    // A4 with e as the first premise and an A2-implicit second premise
    // z op u = max/min(z, u) for u comparable to z. The u <= z half is
    // exactly A5; the u >= z half records the forced value max/min(z, u).
    for (auto [x, y] : orientations(self)) {
      uint64_t cond_mask = join ? p.filter_mask(y) : p.ideal_mask(y);
      uint64_t partners =
          p.strictly_above(self.z) | p.strictly_below(self.z) |
          Poset::bit(self.z);
      uint64_t rest = cond_mask & partners;
      while (rest) {
        int u = __builtin_ctzll(rest);
        rest &= rest - 1;
        bool toward = join ? p.leq(u, self.z) : p.leq(self.z, u);
        add(k, x, u, toward ? self.z : u);
      }
    }
  }

  static std::array<std::pair<int, int>, 2> orientations(const TableEntry& e) {
    return {{{e.x, e.y}, {e.y, e.x}}};
  }

  QnLattice q_;
  std::vector<Item> pending_;
};

inline QnLattice QnLattice::close(const Poset& poset,
                                  const ConstraintSet& constraints,
                                  std::optional<uint64_t> order_seed) {
  Builder b(poset);
  for (const JmConstraint& c : constraints)
    b.add(c.kind, c.left, c.right, c.result);
  b.run(order_seed);
  return b.take();
}

}  // namespace qnlat
