#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bisc/bitset.hpp"

namespace bisc {

/// Enumerates every connected vertex subset S of the graph given by `adjacency`
/// with root in S, S inside `allowed`, and sum of `weight` over S <= budget.
/// Each set is visited exactly once. The visitor returns false to stop early.
///
/// Branching keeps a forbidden set: once a frontier vertex has been tried as the
/// next extension, later siblings exclude it, so no set is reached twice.
template <class Visitor>
bool for_each_connected_set(std::span<const BitSet> adjacency, std::size_t root, const BitSet& allowed,
                            std::span<const int> weight, int budget, Visitor&& visit);

namespace detail {

template <class Visitor>
bool grow_connected(std::span<const BitSet> adjacency, const BitSet& allowed, std::span<const int> weight,
                    int budget, BitSet& current, int used, BitSet extension, BitSet forbidden,
                    Visitor& visit) {
  if (!visit(static_cast<const BitSet&>(current))) return false;
  for (std::size_t u = extension.first(); u != BitSet::npos; u = extension.next(u + 1)) {
    extension.reset(u);
    forbidden.set(u);
    const int w = weight.empty() ? 1 : weight[u];
    if (used + w > budget) continue;
    BitSet child_ext = extension;
    child_ext |= adjacency[u];
    child_ext &= allowed;
    child_ext -= forbidden;
    child_ext -= current;
    current.set(u);
    const bool go_on =
        grow_connected(adjacency, allowed, weight, budget, current, used + w, std::move(child_ext), forbidden, visit);
    current.reset(u);
    if (!go_on) return false;
  }
  return true;
}

}  // namespace detail

template <class Visitor>
bool for_each_connected_set(std::span<const BitSet> adjacency, std::size_t root, const BitSet& allowed,
                            std::span<const int> weight, int budget, Visitor&& visit) {
  if (!allowed.test(root)) return true;
  const int w = weight.empty() ? 1 : weight[root];
  if (w > budget) return true;
  BitSet current(allowed.universe());
  current.set(root);
  BitSet forbidden(allowed.universe());
  forbidden.set(root);
  BitSet ext = adjacency[root] & allowed;
  ext -= forbidden;
  return detail::grow_connected(adjacency, allowed, weight, budget, current, w, std::move(ext), std::move(forbidden),
                                visit);
}

}  // namespace bisc
