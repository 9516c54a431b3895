#pragma once

#include <vector>

#include "bisc/bitset.hpp"
#include "bisc/graph.hpp"

namespace bisc {

/// Undirected simple graph on {0..n-1}; used where bipartiteness is lost
/// (induced subgraphs in the certificate algorithm).
class SimpleGraph {
 public:
  explicit SimpleGraph(int n);

  /// X-vertex x becomes x, Y-vertex y becomes nX + y.
  static SimpleGraph from_bipartite(const BipartiteGraph& g);

  void add_edge(int u, int v);

  int size() const noexcept { return n_; }
  const BitSet& row(int v) const noexcept { return rows_[static_cast<std::size_t>(v)]; }
  int degree(int v) const noexcept { return static_cast<int>(rows_[static_cast<std::size_t>(v)].count()); }
  bool adjacent(int u, int v) const noexcept { return rows_[static_cast<std::size_t>(u)].test(static_cast<std::size_t>(v)); }
  bool is_independent(const BitSet& s) const;

  /// Induced subgraph, vertices relabelled in ascending order of `keep`.
  SimpleGraph induced(const BitSet& keep) const;

 private:
  int n_;
  std::vector<BitSet> rows_;
};

}  // namespace bisc
