#pragma once

// Small builders shared by the test files.

#include <string>
#include <utility>
#include <vector>

#include "qnlat/constraints.hpp"
#include "qnlat/poset.hpp"
#include "qnlat/textio.hpp"

namespace qnlat::test {

inline std::vector<std::pair<char, char>> edge_pairs(
    const std::string& tokens) {
  std::vector<std::pair<char, char>> out;
  for (std::string_view tok : detail::split_tokens(tokens))
    out.emplace_back(tok[0], tok[1]);
  return out;
}

inline Poset make_poset(const std::string& labels,
                        const std::string& edge_tokens) {
  return Poset::build(labels, edge_pairs(edge_tokens));
}

/// Constraints from token text like "a+b=m c*m=a", resolved against `p`.
inline ConstraintSet make_constraints(const Poset& p,
                                      const std::string& tokens) {
  DocumentSettings settings;
  ConstraintGroup g = detail::parse_constraint_line(tokens, settings, 0);
  ConstraintSet out;
  for (const ConstraintToken& t : g.tokens)
    out.push_back({t.kind, *p.find(t.left), *p.find(t.right),
                   *p.find(t.result)});
  return out;
}

// The qn-lattices of the S family; the first one is a nearlattice.
inline Poset s1_poset() {
  return make_poset("abcdefmi", "ad am be bm cf cm di ei fi mi");
}
inline ConstraintSet s1_constraints(const Poset& p) {
  return make_constraints(
      p, "a+b=m a+c=m b+c=m d*m=a e*m=b f*m=c d+m=i e+m=i f+m=i");
}

inline Poset s2_poset() {
  return make_poset("abcdefmij", "ad am be bm cf cm di ei fj ji mj");
}
inline ConstraintSet s2_constraints(const Poset& p) {
  return make_constraints(
      p, "a+b=m a+c=m b+c=m d*m=a e*m=b f*m=c d+m=i e+m=i f+m=j");
}

inline Poset s4_poset() {
  return make_poset("abcdefmijk", "ad am be bm cf cm di ej fk ji kj mk");
}
inline ConstraintSet s4_constraints(const Poset& p) {
  return make_constraints(
      p, "a+b=m a+c=m b+c=m d*m=a e*m=b f*m=c d+m=i e+m=j f+m=k");
}

}  // namespace qnlat::test
