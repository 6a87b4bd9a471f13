#pragma once

#include <string>
#include <vector>

#include "qnlat/error.hpp"
#include "qnlat/poset.hpp"

namespace qnlat {

enum class OpKind { Join, Meet };

inline char op_symbol(OpKind k) { return k == OpKind::Join ? '+' : '*'; }

/// Formal equality left OP right = result over three distinct elements,
/// given by element ids of some poset.
struct JmConstraint {
  OpKind kind;
  int left;
  int right;
  int result;

  static JmConstraint join(int l, int r, int z) {
    return {OpKind::Join, l, r, z};
  }
  static JmConstraint meet(int l, int r, int z) {
    return {OpKind::Meet, l, r, z};
  }

  friend bool operator==(const JmConstraint& a, const JmConstraint& b) {
    if (a.kind != b.kind || a.result != b.result) return false;
    return (a.left == b.left && a.right == b.right) ||
           (a.left == b.right && a.right == b.left);
  }
};

using ConstraintSet = std::vector<JmConstraint>;

namespace detail {
inline std::string constraint_text(const Poset& p, const JmConstraint& c) {
  std::string s;
  s += p.label(c.left);
  s += op_symbol(c.kind);
  s += p.label(c.right);
  s += '=';
  s += p.label(c.result);
  return s;
}
}  // namespace detail

/// Checks a constraint set against a poset: three distinct elements per
/// constraint, coherence across the set, and agreement with the declared
/// order. A join over a comparable pair is redundant at best and wrong at
/// worst (its value is forced to the maximum, which is one of the operands),
/// so it is rejected; likewise a join result below an operand or a meet
/// result above one. The declared order may be weaker than the structure the
/// user has in mind -- omitted edges are the input convention -- so no
/// supremum or infimum equality is required here.
/// Returns the set with exact duplicates removed, in first-occurrence order.
inline ConstraintSet validate_constraints(const Poset& poset,
                                          const ConstraintSet& set,
                                          int line = 0) {
  ConstraintSet out;
  int n = poset.size();
  // result id per (kind, unordered pair), -1 when absent
  std::vector<int> seen(static_cast<size_t>(2) * n * n, -1);
  auto slot = [n](OpKind k, int x, int y) {
    if (x > y) std::swap(x, y);
    return (static_cast<size_t>(k == OpKind::Meet ? 1 : 0) * n + x) * n + y;
  };
  for (const JmConstraint& c : set) {
    if (c.left < 0 || c.left >= n || c.right < 0 || c.right >= n ||
        c.result < 0 || c.result >= n)
      throw Error(ErrorCode::UnknownLabel, "constraint element out of range",
                  line);
    if (c.left == c.right || c.left == c.result || c.right == c.result)
      throw Error(ErrorCode::DegenerateConstraint,
                  detail::constraint_text(poset, c) +
                      " does not involve three distinct elements",
                  line);
    int& prev = seen[slot(c.kind, c.left, c.right)];
    if (prev != -1) {
      if (prev != c.result)
        throw Error(ErrorCode::Incoherent,
                    detail::constraint_text(poset, c) + " conflicts with " +
                        detail::constraint_text(
                            poset, {c.kind, c.left, c.right, prev}),
                    line);
      continue;  // duplicate, identical result
    }
    if (c.kind == OpKind::Join) {
      if (poset.comparable(c.left, c.right))
        throw Error(ErrorCode::NotSupremum,
                    detail::constraint_text(poset, c) +
                        ": the operands are comparable, their join is forced",
                    line);
      if (poset.leq(c.result, c.left) || poset.leq(c.result, c.right))
        throw Error(ErrorCode::NotSupremum,
                    detail::constraint_text(poset, c) +
                        ": the result lies below an operand",
                    line);
    } else {
      if (poset.comparable(c.left, c.right))
        throw Error(ErrorCode::NotInfimum,
                    detail::constraint_text(poset, c) +
                        ": the operands are comparable, their meet is forced",
                    line);
      if (poset.leq(c.left, c.result) || poset.leq(c.right, c.result))
        throw Error(ErrorCode::NotInfimum,
                    detail::constraint_text(poset, c) +
                        ": the result lies above an operand",
                    line);
    }
    prev = c.result;
    out.push_back(c);
  }
  return out;
}

}  // namespace qnlat
