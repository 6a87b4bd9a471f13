#pragma once

#include <cstdint>
#include <vector>

#include "qnlat/error.hpp"
#include "qnlat/qn_lattice.hpp"

namespace qnlat {

/// One subset per bit of the poset's element ids. A subset X is closed when
/// every stored table entry with both operands in X has its result in X;
/// comparable pairs impose nothing because their max/min already lies in X.
using SubsetMask = uint64_t;

namespace detail {

struct MaskCheck {
  uint64_t operands;
  uint64_t result;
};

inline std::vector<MaskCheck> mask_checks(const QnLattice& q) {
  std::vector<MaskCheck> checks;
  for (OpKind k : {OpKind::Join, OpKind::Meet})
    for (const TableEntry& e : q.entries(k))
      checks.push_back(
          {Poset::bit(e.x) | Poset::bit(e.y), Poset::bit(e.z)});
  return checks;
}

inline bool closed(const std::vector<MaskCheck>& checks, SubsetMask x) {
  for (const MaskCheck& c : checks)
    if ((x & c.operands) == c.operands && !(x & c.result)) return false;
  return true;
}

}  // namespace detail

inline bool is_closed_subset(const QnLattice& q, SubsetMask x) {
  return detail::closed(detail::mask_checks(q), x);
}

constexpr int kCountLimit = 24;   // 2^24 subsets
constexpr int kListingLimit = 20;

inline uint64_t count_subuniverses(const QnLattice& q) {
  int n = q.size();
  if (n > kCountLimit)
    throw Error(ErrorCode::TooLarge,
                std::to_string(n) + " elements exceed the enumeration limit " +
                    std::to_string(kCountLimit));
  auto checks = detail::mask_checks(q);
  uint64_t total = 0;
  uint64_t end = uint64_t{1} << n;
  for (SubsetMask x = 0; x < end; ++x)
    if (detail::closed(checks, x)) ++total;
  return total;
}

/// All closed masks in ascending order; guarded tighter than counting since
/// the list itself gets big.
inline std::vector<SubsetMask> enumerate_subuniverses(const QnLattice& q) {
  int n = q.size();
  if (n > kListingLimit)
    throw Error(ErrorCode::TooLarge,
                std::to_string(n) + " elements exceed the listing limit " +
                    std::to_string(kListingLimit));
  auto checks = detail::mask_checks(q);
  std::vector<SubsetMask> out;
  uint64_t end = uint64_t{1} << n;
  for (SubsetMask x = 0; x < end; ++x)
    if (detail::closed(checks, x)) out.push_back(x);
  return out;
}

}  // namespace qnlat
