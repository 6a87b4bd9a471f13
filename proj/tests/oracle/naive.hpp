#pragma once

// Independent reference implementations used only by the test suite. These
// are written straight from the definitions -- full restart scans, literal
// subset checks -- and share nothing with the fast path beyond the domain
// types, so agreement between the two is meaningful evidence.

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qnlat/constraints.hpp"
#include "qnlat/error.hpp"
#include "qnlat/poset.hpp"
#include "qnlat/qn_lattice.hpp"

namespace qnlat::oracle {

namespace detail {

class LiteralAlgebra {
 public:
  explicit LiteralAlgebra(const Poset& p)
      : poset_(p),
        n_(p.size()),
        join_(static_cast<size_t>(n_) * n_, -1),
        meet_(static_cast<size_t>(n_) * n_, -1) {}

  std::optional<int> lookup(OpKind k, int x, int y) const {
    if (x == y) return x;
    if (poset_.less(x, y)) return k == OpKind::Join ? y : x;
    if (poset_.less(y, x)) return k == OpKind::Join ? x : y;
    int v = tbl(k)[idx(x, y)];
    if (v < 0) return std::nullopt;
    return v;
  }

  void define(OpKind k, int x, int y, int v) {
    auto cur = lookup(k, x, y);
    if (cur) {
      if (*cur != v)
        throw Error(ErrorCode::DerivedConflict,
                    std::string("naive closure: ") + poset_.label(x) +
                        op_symbol(k) + poset_.label(y) + " forced to both " +
                        poset_.label(*cur) + " and " + poset_.label(v));
      return;
    }
    tbl(k)[idx(x, y)] = v;
    tbl(k)[idx(y, x)] = v;
  }

  std::vector<TableEntry> stored(OpKind k) const {
    std::vector<TableEntry> out;
    for (int x = 0; x < n_; ++x)
      for (int y = x + 1; y < n_; ++y)
        if (tbl(k)[idx(x, y)] >= 0) out.push_back({x, y, tbl(k)[idx(x, y)]});
    return out;
  }

  const Poset& poset() const { return poset_; }
  int size() const { return n_; }

 private:
  size_t idx(int x, int y) const { return static_cast<size_t>(x) * n_ + y; }
  std::vector<int>& tbl(OpKind k) {
    return k == OpKind::Join ? join_ : meet_;
  }
  const std::vector<int>& tbl(OpKind k) const {
    return k == OpKind::Join ? join_ : meet_;
  }

  const Poset& poset_;
  int n_;
  std::vector<int> join_;
  std::vector<int> meet_;
};

struct Fix {
  OpKind kind;
  int x, y, v;
};

// Every A4/A5 instance whose conclusion is still undefined. Conclusions that
// are defined with a different value are conflicts and throw.
inline std::vector<Fix> scan_violations(const LiteralAlgebra& a) {
  std::vector<Fix> fixes;
  const Poset& p = a.poset();
  int n = a.size();
  for (OpKind k : {OpKind::Join, OpKind::Meet}) {
    bool join = k == OpKind::Join;
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        if (x == y) continue;
        auto z = a.lookup(k, x, y);
        if (!z) continue;
        for (int u = 0; u < n; ++u) {
          // A4: x op y = z, z op u = v, y <= u (dually u <= y)
          if (join ? p.leq(y, u) : p.leq(u, y)) {
            auto v = a.lookup(k, *z, u);
            if (v) {
              auto cur = a.lookup(k, x, u);
              if (cur && *cur != *v)
                throw Error(ErrorCode::DerivedConflict,
                            "naive closure: A4 conclusion conflicts");
              if (!cur) fixes.push_back({k, x, u, *v});
            }
          }
          // A5: x op y = z and x <= u <= z (dually z <= u <= x)
          bool between = join ? (p.leq(x, u) && p.leq(u, *z))
                              : (p.leq(*z, u) && p.leq(u, x));
          if (between) {
            auto cur = a.lookup(k, u, y);
            if (cur && *cur != *z)
              throw Error(ErrorCode::DerivedConflict,
                          "naive closure: A5 conclusion conflicts");
            if (!cur) fixes.push_back({k, u, y, *z});
          }
        }
      }
  }
  return fixes;
}

}  // namespace detail

/// Restart-scan closure: find all axiom violations, repair one, rescan from
/// scratch, until none remain. With a seed the repaired violation is chosen
/// at random, otherwise the first one found is taken.
inline QnLattice naive_close(const Poset& poset, const ConstraintSet& set,
                             std::optional<uint64_t> seed = std::nullopt) {
  detail::LiteralAlgebra algebra(poset);
  for (const JmConstraint& c : set) {
    if (poset.comparable(c.left, c.right))
      throw Error(ErrorCode::DerivedConflict,
                  "naive closure: constraint over a comparable pair");
    algebra.define(c.kind, c.left, c.right, c.result);
  }
  std::mt19937_64 rng(seed.value_or(0));
  for (;;) {
    std::vector<detail::Fix> fixes = detail::scan_violations(algebra);
    if (fixes.empty()) break;
    size_t pick = 0;
    if (seed)
      pick = std::uniform_int_distribution<size_t>(0, fixes.size() - 1)(rng);
    const detail::Fix& f = fixes[pick];
    algebra.define(f.kind, f.x, f.y, f.v);
  }
  return QnLattice::unchecked(poset, algebra.stored(OpKind::Join),
                              algebra.stored(OpKind::Meet));
}

/// Literal subuniverse count: walks every subset and re-tests closedness
/// from the definition, comparable pairs included.
inline uint64_t naive_count(const QnLattice& q) {
  int n = q.size();
  if (n > 16)
    throw Error(ErrorCode::TooLarge, "naive count is limited to 16 elements");
  detail::LiteralAlgebra algebra(q.poset());
  for (OpKind k : {OpKind::Join, OpKind::Meet})
    for (const TableEntry& e : q.entries(k)) algebra.define(k, e.x, e.y, e.z);
  uint64_t total = 0;
  uint64_t end = uint64_t{1} << n;
  for (uint64_t mask = 0; mask < end; ++mask) {
    bool closed = true;
    for (int x = 0; x < n && closed; ++x) {
      if (!((mask >> x) & 1)) continue;
      for (int y = 0; y < n && closed; ++y) {
        if (!((mask >> y) & 1)) continue;
        for (OpKind k : {OpKind::Join, OpKind::Meet}) {
          auto v = algebra.lookup(k, x, y);
          if (v && !((mask >> *v) & 1)) {
            closed = false;
            break;
          }
        }
      }
    }
    if (closed) ++total;
  }
  return total;
}

struct RandomInstanceSpec {
  int n = 6;
  double edge_density = 0.3;
  int constraint_count = 3;
  uint64_t seed = 0;
};

/// Seeded random poset plus a valid constraint set over it. Joins and meets
/// are drawn from incomparable pairs whose supremum/infimum exists, so the
/// result harmonizes with the order by construction.
inline std::pair<Poset, ConstraintSet> random_instance(
    const RandomInstanceSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::string labels;
  for (int i = 0; i < spec.n; ++i) labels += static_cast<char>('a' + i);
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<int> order(spec.n);
    for (int i = 0; i < spec.n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::pair<char, char>> edges;
    for (int i = 0; i < spec.n; ++i)
      for (int k = i + 1; k < spec.n; ++k)
        if (coin(rng) < spec.edge_density)
          edges.emplace_back(labels[order[i]], labels[order[k]]);
    Poset poset = Poset::build(labels, edges);

    ConstraintSet candidates;
    for (int x = 0; x < spec.n; ++x)
      for (int y = x + 1; y < spec.n; ++y) {
        if (poset.comparable(x, y)) continue;
        if (auto lub = poset.least_upper_bound(x, y))
          candidates.push_back(JmConstraint::join(x, y, *lub));
        if (auto glb = poset.greatest_lower_bound(x, y))
          candidates.push_back(JmConstraint::meet(x, y, *glb));
      }
    if (static_cast<int>(candidates.size()) < spec.constraint_count) continue;
    std::shuffle(candidates.begin(), candidates.end(), rng);
    candidates.resize(spec.constraint_count);
    return {poset, validate_constraints(poset, candidates)};
  }
  throw Error(ErrorCode::GenerationExhausted,
              "no valid instance after 200 attempts");
}

}  // namespace qnlat::oracle
