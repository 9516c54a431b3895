#include "bisc/simple_graph.hpp"

#include "bisc/errors.hpp"

namespace bisc {

SimpleGraph::SimpleGraph(int n) : n_(n) {
  if (n < 0) throw InvalidArgument("negative vertex count");
  rows_.assign(static_cast<std::size_t>(n), BitSet(static_cast<std::size_t>(n)));
}

SimpleGraph SimpleGraph::from_bipartite(const BipartiteGraph& g) {
  SimpleGraph s(g.nX() + g.nY());
  for (const auto& [x, y] : g.edges()) s.add_edge(x, g.nX() + y);
  return s;
}

void SimpleGraph::add_edge(int u, int v) {
  if (u < 0 || v < 0 || u >= n_ || v >= n_) throw InvalidArgument("edge endpoint out of range");
  if (u == v) throw InvalidArgument("self-loop");
  rows_[static_cast<std::size_t>(u)].set(static_cast<std::size_t>(v));
  rows_[static_cast<std::size_t>(v)].set(static_cast<std::size_t>(u));
}

bool SimpleGraph::is_independent(const BitSet& s) const {
  bool ok = true;
  s.for_each([&](std::size_t v) {
    if (rows_[v].intersects(s)) ok = false;
  });
  return ok;
}

SimpleGraph SimpleGraph::induced(const BitSet& keep) const {
  std::vector<int> index(static_cast<std::size_t>(n_), -1);
  int k = 0;
  keep.for_each([&](std::size_t v) { index[v] = k++; });
  SimpleGraph h(k);
  keep.for_each([&](std::size_t v) {
    rows_[v].for_each([&](std::size_t u) {
      if (u > v && index[u] >= 0) h.add_edge(index[v], index[u]);
    });
  });
  return h;
}

}  // namespace bisc
