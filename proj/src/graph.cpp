#include "bisc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "bisc/connected_sets.hpp"
#include "bisc/errors.hpp"
#include "bisc/numeric.hpp"

namespace bisc {

namespace {

void build_square(const std::vector<std::vector<int>>& adj, const std::vector<std::vector<int>>& other_adj,
                  std::size_t side_size, std::vector<std::vector<int>>& sq, std::vector<BitSet>& sq_rows) {
  sq.assign(adj.size(), {});
  sq_rows.assign(adj.size(), BitSet(side_size));
  for (std::size_t v = 0; v < adj.size(); ++v) {
    BitSet& r = sq_rows[v];
    for (int y : adj[v])
      for (int u : other_adj[static_cast<std::size_t>(y)])
        if (static_cast<std::size_t>(u) != v) r.set(static_cast<std::size_t>(u));
    sq[v] = r.members();
  }
}

void require_side(const SideSet& a, const BipartiteGraph& g) {
  if (a.bits.universe() != static_cast<std::size_t>(g.n(a.side)))
    throw InvalidArgument(std::string("set universe does not match side ") + side_name(a.side));
}

}  // namespace

BipartiteGraph::BipartiteGraph(int nX, int nY, int d, const std::vector<Edge>& edges) : nX_(nX), nY_(nY), d_(d) {
  if (nX <= 0 || nY <= 0) throw InvalidArgument("both sides must be nonempty");
  if (d <= 0) throw InvalidArgument("degree must be positive");
  if (d > nX || d > nY) throw InvalidArgument("degree exceeds side size");
  adjX_.assign(static_cast<std::size_t>(nX), {});
  adjY_.assign(static_cast<std::size_t>(nY), {});
  rowX_.assign(static_cast<std::size_t>(nX), BitSet(static_cast<std::size_t>(nY)));
  rowY_.assign(static_cast<std::size_t>(nY), BitSet(static_cast<std::size_t>(nX)));
  for (const auto& [x, y] : edges) {
    if (x < 0 || x >= nX || y < 0 || y >= nY)
      throw InvalidArgument("edge (" + std::to_string(x) + "," + std::to_string(y) + ") out of range");
    auto& r = rowX_[static_cast<std::size_t>(x)];
    if (r.test(static_cast<std::size_t>(y)))
      throw InvalidArgument("parallel edge (" + std::to_string(x) + "," + std::to_string(y) + ")");
    r.set(static_cast<std::size_t>(y));
    rowY_[static_cast<std::size_t>(y)].set(static_cast<std::size_t>(x));
    adjX_[static_cast<std::size_t>(x)].push_back(y);
    adjY_[static_cast<std::size_t>(y)].push_back(x);
  }
  for (int x = 0; x < nX; ++x)
    if (static_cast<int>(adjX_[static_cast<std::size_t>(x)].size()) != d)
      throw InvalidArgument("vertex x" + std::to_string(x) + " has degree " +
                            std::to_string(adjX_[static_cast<std::size_t>(x)].size()) + ", expected " +
                            std::to_string(d));
  for (int y = 0; y < nY; ++y)
    if (static_cast<int>(adjY_[static_cast<std::size_t>(y)].size()) != d)
      throw InvalidArgument("vertex y" + std::to_string(y) + " has degree " +
                            std::to_string(adjY_[static_cast<std::size_t>(y)].size()) + ", expected " +
                            std::to_string(d));
  for (auto& l : adjX_) std::sort(l.begin(), l.end());
  for (auto& l : adjY_) std::sort(l.begin(), l.end());
  build_square(adjX_, adjY_, static_cast<std::size_t>(nX), sqX_, sqRowX_);
  build_square(adjY_, adjX_, static_cast<std::size_t>(nY), sqY_, sqRowY_);
}

int BipartiteGraph::balanced_n() const {
  if (nX_ != nY_) throw InvalidArgument("graph sides differ in size");
  return nX_;
}

std::vector<BipartiteGraph::Edge> BipartiteGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(nX_) * static_cast<std::size_t>(d_));
  for (int x = 0; x < nX_; ++x)
    for (int y : adjX_[static_cast<std::size_t>(x)]) out.emplace_back(x, y);
  return out;
}

SideSet BipartiteGraph::make_set(Side s, const std::vector<int>& members) const {
  SideSet out = empty_set(s);
  for (int m : members) {
    if (m < 0 || m >= n(s)) throw InvalidArgument("vertex index out of range");
    out.bits.set(static_cast<std::size_t>(m));
  }
  return out;
}

void ExpansionParams::validate() const {
  if (!(C1 > 0)) throw InvalidArgument("C1 must be positive");
  if (!(alpha > 0 && alpha <= 1)) throw InvalidArgument("alpha must lie in (0,1]");
}

SideSet neighborhood(const BipartiteGraph& g, const SideSet& a) {
  require_side(a, g);
  SideSet out = g.empty_set(opposite(a.side));
  a.bits.for_each([&](std::size_t v) { out.bits |= g.row(a.side, static_cast<int>(v)); });
  return out;
}

SideSet closure(const BipartiteGraph& g, const SideSet& a) {
  const SideSet w = neighborhood(g, a);
  SideSet out = g.empty_set(a.side);
  if (a.empty()) return out;
  for (int u = 0; u < g.n(a.side); ++u)
    if (g.row(a.side, u).subset_of(w.bits)) out.bits.set(static_cast<std::size_t>(u));
  return out;
}

std::vector<SideSet> two_linked_components(const BipartiteGraph& g, const SideSet& a) {
  require_side(a, g);
  std::vector<SideSet> comps;
  BitSet remaining = a.bits;
  for (std::size_t start = remaining.first(); start != BitSet::npos; start = remaining.first()) {
    BitSet comp(remaining.universe());
    BitSet frontier(remaining.universe());
    frontier.set(start);
    while (frontier.any()) {
      comp |= frontier;
      remaining -= frontier;
      BitSet next(remaining.universe());
      frontier.for_each([&](std::size_t v) { next |= g.square_row(a.side, static_cast<int>(v)); });
      next &= remaining;
      frontier = std::move(next);
    }
    comps.emplace_back(a.side, std::move(comp));
  }
  return comps;
}

bool is_independent(const BipartiteGraph& g, const BipartiteSet& s) {
  bool ok = true;
  s.x.for_each([&](std::size_t x) {
    if (g.row(Side::X, static_cast<int>(x)).intersects(s.y)) ok = false;
  });
  return ok;
}

bool is_two_linked(const BipartiteGraph& g, const SideSet& a) {
  require_side(a, g);
  const std::size_t start = a.bits.first();
  if (start == BitSet::npos) return false;
  BitSet reached(a.bits.universe());
  BitSet frontier(a.bits.universe());
  frontier.set(start);
  while (frontier.any()) {
    reached |= frontier;
    BitSet next(a.bits.universe());
    frontier.for_each([&](std::size_t v) { next |= g.square_row(a.side, static_cast<int>(v)); });
    next &= a.bits;
    next -= reached;
    frontier = std::move(next);
  }
  return reached == a.bits;
}

bool is_expanding_sizes(int boundary, int closure_size, int d, double C1) {
  const double threshold = (C1 / 2.0) * log2sq_over_d(d) * static_cast<double>(boundary);
  return static_cast<double>(boundary - closure_size) >= threshold - 1e-9;
}

bool is_expanding(const BipartiteGraph& g, const SideSet& a, const ExpansionParams& p) {
  if (a.empty()) throw InvalidArgument("is_expanding is undefined on the empty set");
  const SideSet w = neighborhood(g, a);
  const SideSet cl = closure(g, a);
  return is_expanding_sizes(static_cast<int>(w.size()), static_cast<int>(cl.size()), g.degree(), p.C1);
}

namespace {

bool violates(const BipartiteGraph& g, const SideSet& a, double alpha) {
  const double need = (1.0 + alpha) * static_cast<double>(a.size());
  return static_cast<double>(neighborhood(g, a).size()) < need - 1e-12;
}

}  // namespace

ExpanderVerdict check_alpha_expander(const BipartiteGraph& g, double alpha, ExpanderCheckMode mode,
                                     const ExpanderCheckOptions& opts) {
  if (alpha < 0) throw InvalidArgument("alpha must be nonnegative");
  ExpanderVerdict verdict{ExpanderVerdictKind::verified, std::nullopt, 0};
  // Regular bipartite graphs satisfy Hall's condition, so alpha = 0 always holds.
  if (alpha == 0) return verdict;

  if (mode == ExpanderCheckMode::exhaustive) {
    if (std::max(g.nX(), g.nY()) > opts.exhaustive_cap)
      throw CapacityError("exhaustive expansion check limited to sides of size " +
                          std::to_string(opts.exhaustive_cap));
    for (Side s : {Side::X, Side::Y}) {
      const int n = g.n(s);
      const int max_size = g.n(Side::X) / 2;
      for (int k = 1; k <= std::min(max_size, n); ++k) {
        // Lexicographic k-subsets.
        std::vector<int> idx(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
        while (true) {
          SideSet a = g.make_set(s, idx);
          ++verdict.sets_checked;
          if (violates(g, a, alpha)) {
            verdict.kind = ExpanderVerdictKind::falsified;
            verdict.witness = std::move(a);
            return verdict;
          }
          int i = k - 1;
          while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
          if (i < 0) break;
          ++idx[static_cast<std::size_t>(i)];
          for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
      }
    }
    return verdict;
  }

  std::mt19937_64 rng(opts.seed);
  const int half = g.n(Side::X) / 2;
  for (Side s : {Side::X, Side::Y}) {
    const int n = g.n(s);
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int t = 0; t < opts.heuristic_samples && half >= 1; ++t) {
      const int k = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(std::min(half, n))));
      for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
      for (int i = 0; i < k; ++i) {
        const int j = i + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n - i)));
        std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
      }
      SideSet a = g.make_set(s, std::vector<int>(perm.begin(), perm.begin() + k));
      ++verdict.sets_checked;
      if (violates(g, a, alpha)) {
        verdict.kind = ExpanderVerdictKind::falsified;
        verdict.witness = std::move(a);
        return verdict;
      }
    }
    std::vector<BitSet> adjacency;
    adjacency.reserve(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) adjacency.push_back(g.square_row(s, v));
    const int cap = std::min(opts.heuristic_linked_cap, half);
    for (int root = 0; root < n && !verdict.witness; ++root) {
      BitSet allowed = BitSet::full(static_cast<std::size_t>(n));
      for (int u = 0; u < root; ++u) allowed.reset(static_cast<std::size_t>(u));
      for_each_connected_set(std::span<const BitSet>(adjacency), static_cast<std::size_t>(root), allowed, {}, cap,
                             [&](const BitSet& b) {
                               SideSet a(s, b);
                               ++verdict.sets_checked;
                               if (violates(g, a, alpha)) {
                                 verdict.witness = std::move(a);
                                 return false;
                               }
                               return true;
                             });
    }
    if (verdict.witness) {
      verdict.kind = ExpanderVerdictKind::falsified;
      return verdict;
    }
  }
  verdict.kind = ExpanderVerdictKind::unknown;
  return verdict;
}

}  // namespace bisc
