#include "bisc/containers.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <unordered_set>

#include "bisc/connected_sets.hpp"
#include "bisc/errors.hpp"
#include "bisc/oracle.hpp"

namespace bisc {

// ---------------------------------------------------------------------------
// Set cover

double cover_bound(int q_count, int a, int b) {
  return static_cast<double>(q_count) / a * (1.0 + std::log(static_cast<double>(b)));
}

std::vector<int> greedy_cover(const CoverInstance& h, int a, int b) {
  if (a < 1) throw InvalidArgument("greedy_cover: a must be at least 1");
  if (static_cast<int>(h.q_to_p.size()) != h.q_count) throw InvalidArgument("greedy_cover: q_to_p size mismatch");
  std::vector<int> p_degree(static_cast<std::size_t>(h.p_count), 0);
  for (int q = 0; q < h.q_count; ++q) {
    const auto& ps = h.q_to_p[static_cast<std::size_t>(q)];
    if (static_cast<int>(ps.size()) > b)
      throw InvalidArgument("greedy_cover: Q-vertex " + std::to_string(q) + " exceeds degree bound b");
    for (int p : ps) {
      if (p < 0 || p >= h.p_count) throw InvalidArgument("greedy_cover: P index out of range");
      ++p_degree[static_cast<std::size_t>(p)];
    }
  }
  for (int p = 0; p < h.p_count; ++p) {
    if (p_degree[static_cast<std::size_t>(p)] == 0)
      throw InvalidArgument("greedy_cover: P-vertex " + std::to_string(p) + " cannot be covered");
    if (p_degree[static_cast<std::size_t>(p)] < a)
      throw InvalidArgument("greedy_cover: P-vertex " + std::to_string(p) + " has degree below a");
  }
  BitSet uncovered = BitSet::full(static_cast<std::size_t>(h.p_count));
  std::vector<BitSet> rows;
  rows.reserve(static_cast<std::size_t>(h.q_count));
  for (const auto& ps : h.q_to_p) {
    BitSet r(static_cast<std::size_t>(h.p_count));
    for (int p : ps) r.set(static_cast<std::size_t>(p));
    rows.push_back(std::move(r));
  }
  std::vector<int> chosen;
  while (uncovered.any()) {
    int best = -1;
    std::size_t best_gain = 0;
    for (int q = 0; q < h.q_count; ++q) {
      const std::size_t gain = rows[static_cast<std::size_t>(q)].intersection_count(uncovered);
      if (gain > best_gain) {
        best_gain = gain;
        best = q;
      }
    }
    chosen.push_back(best);
    uncovered -= rows[static_cast<std::size_t>(best)];
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

// ---------------------------------------------------------------------------
// Essential subsets and small generators

SideSet heavy_boundary(const BipartiteGraph& g, const SideSet& a, double s) {
  const SideSet w = neighborhood(g, a);
  const SideSet cl = closure(g, a);
  SideSet out = g.empty_set(w.side);
  w.bits.for_each([&](std::size_t u) {
    if (static_cast<double>(g.row(w.side, static_cast<int>(u)).intersection_count(cl.bits)) >= s - 1e-12)
      out.bits.set(u);
  });
  return out;
}

bool is_essential_subset(const BipartiteGraph& g, const SideSet& f, const SideSet& a) {
  if (f.side != opposite(a.side)) return false;
  const SideSet w = neighborhood(g, a);
  if (!f.bits.subset_of(w.bits)) return false;
  if (!heavy_boundary(g, a, g.degree() / 2.0).bits.subset_of(f.bits)) return false;
  return closure(g, a).bits.subset_of(neighborhood(g, f).bits);
}

double small_generator_bound_prime(int a, int w, int d) {
  return 2.0 * a / d * std::log(static_cast<double>(d)) + 2.0 * w / d;
}

double small_generator_bound_double_prime(int a, int w, int d) {
  return small_generator_bound_prime(a, w, d) + 2.0 * (w - a);
}

namespace {

// Shortest path inside `within` (in G^2) from `from` to any vertex of `targets`;
// returns the interior vertices plus the endpoint reached.
BitSet connecting_path(const BipartiteGraph& g, Side side, const BitSet& from, const BitSet& targets, const BitSet& within) {
  const std::size_t n = within.universe();
  std::vector<int> parent(n, -2);
  std::deque<std::size_t> queue;
  from.for_each([&](std::size_t u) {
    parent[u] = -1;
    queue.push_back(u);
  });
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    if (targets.test(u) && parent[u] != -1) {
      BitSet path(n);
      for (int x = static_cast<int>(u); x >= 0 && !from.test(static_cast<std::size_t>(x)); x = parent[static_cast<std::size_t>(x)])
        path.set(static_cast<std::size_t>(x));
      return path;
    }
    for (int x : g.square_neighbors(side, static_cast<int>(u)))
      if (within.test(static_cast<std::size_t>(x)) && parent[static_cast<std::size_t>(x)] == -2) {
        parent[static_cast<std::size_t>(x)] = static_cast<int>(u);
        queue.push_back(static_cast<std::size_t>(x));
      }
  }
  throw InvalidArgument("set is not 2-linked inside its host");
}

// Adds vertices of `host` until `s` is 2-linked; `s` must contain `anchor`.
void link_up(const BipartiteGraph& g, Side side, BitSet& s, int anchor, const BitSet& host) {
  while (true) {
    auto comps = two_linked_components(g, SideSet(side, s));
    if (comps.size() <= 1) return;
    const auto it = std::find_if(comps.begin(), comps.end(),
                                 [&](const SideSet& c) { return c.contains(static_cast<std::size_t>(anchor)); });
    const BitSet& root = it->bits;
    s |= connecting_path(g, side, root, s - root, host);
  }
}

BitSet neighborhood_bits(const BipartiteGraph& g, Side side, const BitSet& s) {
  BitSet out(static_cast<std::size_t>(g.n(opposite(side))));
  s.for_each([&](std::size_t u) { out |= g.row(side, static_cast<int>(u)); });
  return out;
}

// Greedy cover of `targets` (opposite side) by vertices of `pool`.
BitSet cover_by(const BipartiteGraph& g, Side side, const BitSet& targets, const BitSet& pool) {
  const std::vector<int> pool_list = pool.members();
  const std::vector<int> target_list = targets.members();
  std::vector<int> index(targets.universe(), -1);
  for (std::size_t i = 0; i < target_list.size(); ++i) index[static_cast<std::size_t>(target_list[i])] = static_cast<int>(i);
  CoverInstance h{static_cast<int>(target_list.size()), static_cast<int>(pool_list.size()), {}};
  int b = 1;
  for (int q : pool_list) {
    std::vector<int> ps;
    for (int y : g.neighbors(side, q))
      if (index[static_cast<std::size_t>(y)] >= 0) ps.push_back(index[static_cast<std::size_t>(y)]);
    b = std::max(b, static_cast<int>(ps.size()));
    h.q_to_p.push_back(std::move(ps));
  }
  BitSet out(pool.universe());
  if (target_list.empty()) return out;
  for (int q : greedy_cover(h, 1, b)) out.set(static_cast<std::size_t>(pool_list[static_cast<std::size_t>(q)]));
  return out;
}

}  // namespace

SmallGenerator small_generator(const BipartiteGraph& g, const SideSet& a, const ExpansionParams& /*p*/, int anchor) {
  if (!is_two_linked(g, a)) throw InvalidArgument("small_generator needs a nonempty 2-linked set");
  const Side side = a.side;
  const int v = anchor < 0 ? static_cast<int>(a.bits.first()) : anchor;
  if (!a.contains(static_cast<std::size_t>(v))) throw InvalidArgument("anchor is not a member of A");
  const BitSet cl = closure(g, a).bits;
  const BitSet w = neighborhood(g, a).bits;
  const BitSet heavy = heavy_boundary(g, a, g.degree() / 2.0).bits;

  // A0: members of A with pairwise disjoint neighborhoods, starting from v.
  BitSet s(a.bits.universe());
  s.set(static_cast<std::size_t>(v));
  BitSet used = g.row(side, v);
  a.bits.for_each([&](std::size_t u) {
    if (!g.row(side, static_cast<int>(u)).intersects(used)) {
      s.set(u);
      used |= g.row(side, static_cast<int>(u));
    }
  });
  // Every vertex of [A] needs a neighbor inside N(A').
  auto reaches_closure = [&](const BitSet& f) {
    bool ok = true;
    cl.for_each([&](std::size_t u) {
      if (!g.row(side, static_cast<int>(u)).intersects(f)) ok = false;
    });
    return ok;
  };
  {
    BitSet missing(cl.universe());
    const BitSet f = neighborhood_bits(g, side, s);
    cl.for_each([&](std::size_t u) {
      if (!g.row(side, static_cast<int>(u)).intersects(f)) missing.set(u);
    });
    // Cover the missing closure vertices through second neighborhoods.
    while (missing.any()) {
      int best = -1;
      std::size_t best_gain = 0;
      a.bits.for_each([&](std::size_t q) {
        if (s.test(q)) return;
        std::size_t gain = 0;
        missing.for_each([&](std::size_t u) {
          if (g.row(side, static_cast<int>(u)).intersects(g.row(side, static_cast<int>(q)))) ++gain;
        });
        if (gain > best_gain) {
          best_gain = gain;
          best = static_cast<int>(q);
        }
      });
      s.set(static_cast<std::size_t>(best));
      const BitSet& r = g.row(side, best);
      BitSet still(missing.universe());
      missing.for_each([&](std::size_t u) {
        if (!g.row(side, static_cast<int>(u)).intersects(r)) still.set(u);
      });
      missing = std::move(still);
    }
  }
  // A1: cover of W_{d/2} by members of A.
  s |= cover_by(g, side, heavy - neighborhood_bits(g, side, s), a.bits);
  // A2: link the pieces inside A.
  link_up(g, side, s, v, a.bits);

  auto prime_ok = [&](const BitSet& t) {
    if (!is_two_linked(g, SideSet(side, t))) return false;
    const BitSet f = neighborhood_bits(g, side, t);
    return heavy.subset_of(f) && reaches_closure(f);
  };
  for (std::size_t u = s.universe(); u-- > 0;) {
    if (!s.test(u) || static_cast<int>(u) == v) continue;
    BitSet t = s;
    t.reset(u);
    if (prime_ok(t)) s = std::move(t);
  }
  const BitSet a_prime = s;

  // A3: cover the rest of W.
  s |= cover_by(g, side, w - neighborhood_bits(g, side, s), a.bits - s);
  link_up(g, side, s, v, a.bits);
  for (std::size_t u = s.universe(); u-- > 0;) {
    if (!s.test(u) || a_prime.test(u)) continue;
    BitSet t = s;
    t.reset(u);
    if (neighborhood_bits(g, side, t) == w && is_two_linked(g, SideSet(side, t))) s = std::move(t);
  }
  return SmallGenerator{SideSet(side, a_prime), SideSet(side, s), v};
}

int candidate_size_cap(int w, int d) {
  const double x = 4.0 * w / d * std::log(static_cast<double>(d));
  return std::max(1, static_cast<int>(std::ceil(x - 1e-9)));
}

int candidate_walk_length(int w, int d) {
  const double x = 8.0 * w / d * std::log(static_cast<double>(d));
  return std::max(0, static_cast<int>(std::ceil(x - 1e-9)));
}

namespace {

std::vector<BitSet> square_rows(const BipartiteGraph& g, Side side) {
  std::vector<BitSet> rows;
  rows.reserve(static_cast<std::size_t>(g.n(side)));
  for (int u = 0; u < g.n(side); ++u) rows.push_back(g.square_row(side, u));
  return rows;
}

// Map N(B) -> smallest |B| over 2-linked B containing v with |B| <= cap.
using CandidateCatalog = std::unordered_map<BitSet, int, BitSetHash>;

void note_candidate(CandidateCatalog& cat, BitSet f, int size) {
  auto [it, inserted] = cat.emplace(std::move(f), size);
  if (!inserted && size < it->second) it->second = size;
}

CandidateCatalog catalog_connected(const BipartiteGraph& g, Side side, int v, int cap) {
  CandidateCatalog cat;
  const auto rows = square_rows(g, side);
  const BitSet all = BitSet::full(static_cast<std::size_t>(g.n(side)));
  for_each_connected_set(std::span<const BitSet>(rows), static_cast<std::size_t>(v), all, {}, cap, [&](const BitSet& b) {
    note_candidate(cat, neighborhood_bits(g, side, b), static_cast<int>(b.count()));
    return true;
  });
  return cat;
}

// The step-list procedure: every list S in {0..d(d-1)}^L, walking v^(i) = (v^(i-1))_{S_i}
// with step 0 meaning stay; output the visited set when it has at most cap vertices.
CandidateCatalog catalog_walk(const BipartiteGraph& g, Side side, int v, int cap, int length, std::uint64_t budget) {
  CandidateCatalog cat;
  const int alphabet = g.degree() * (g.degree() - 1);
  std::uint64_t nodes = 0;
  BitSet visited(static_cast<std::size_t>(g.n(side)));
  std::vector<int> count(static_cast<std::size_t>(g.n(side)), 0);
  int distinct = 0;
  std::function<void(int, int)> walk = [&](int at, int depth) {
    if (++nodes > budget) throw CapacityError("walk enumeration exceeded its node budget");
    if (depth == length) {
      note_candidate(cat, neighborhood_bits(g, side, visited), distinct);
      return;
    }
    const auto nbrs = g.square_neighbors(side, at);
    for (int step = 0; step <= alphabet; ++step) {
      int next;
      if (step == 0) {
        next = at;
      } else if (step <= static_cast<int>(nbrs.size())) {
        next = nbrs[static_cast<std::size_t>(step - 1)];
      } else {
        break;  // no such neighbor: the list does not describe a walk
      }
      const bool fresh = count[static_cast<std::size_t>(next)]++ == 0;
      if (fresh) {
        visited.set(static_cast<std::size_t>(next));
        ++distinct;
      }
      if (distinct <= cap) walk(next, depth + 1);
      if (--count[static_cast<std::size_t>(next)] == 0) {
        visited.reset(static_cast<std::size_t>(next));
        --distinct;
      }
    }
  };
  count[static_cast<std::size_t>(v)] = 1;
  visited.set(static_cast<std::size_t>(v));
  distinct = 1;
  walk(v, 0);
  return cat;
}

std::vector<SideSet> sorted_sets(Side side, std::vector<BitSet> sets) {
  std::sort(sets.begin(), sets.end());
  std::vector<SideSet> out;
  out.reserve(sets.size());
  for (auto& b : sets) out.emplace_back(side, std::move(b));
  return out;
}

}  // namespace

std::vector<SideSet> enumerate_essential_candidates(const BipartiteGraph& g, Side side, int v, int w,
                                                    CandidateMethod method, std::uint64_t walk_budget) {
  if (v < 0 || v >= g.n(side)) throw InvalidArgument("anchor vertex out of range");
  const int cap = candidate_size_cap(w, g.degree());
  const CandidateCatalog cat = method == CandidateMethod::connected
                                   ? catalog_connected(g, side, v, cap)
                                   : catalog_walk(g, side, v, cap, candidate_walk_length(w, g.degree()), walk_budget);
  std::vector<BitSet> sets;
  sets.reserve(cat.size());
  for (const auto& [f, size] : cat) sets.push_back(f);
  return sorted_sets(opposite(side), std::move(sets));
}

// ---------------------------------------------------------------------------
// Closed non-expanding sets

std::pair<int, int> boundary_size_range(int a, int n_other, int d, double C1) {
  const double x = C1 * log2sq_over_d(d);
  const int hi = x <= 1.0 ? static_cast<int>(std::floor(a * (1.0 + x) + 1e-9)) : n_other;
  return {a, std::min(hi, n_other)};
}

int extension_budget(int w, int d, double C1) {
  return static_cast<int>(std::floor(C1 * w * log2sq_over_d(d) + 1e-9));
}

NonExpandingEnumerator::NonExpandingEnumerator(const BipartiteGraph& g, Side side, ExpansionParams p,
                                               CandidateMethod method)
    : g_(g), side_(side), p_(p), method_(method) {
  p_.validate();
}

const NonExpandingEnumerator::Anchor& NonExpandingEnumerator::anchor(int v) {
  if (auto it = anchors_.find(v); it != anchors_.end()) return it->second;
  const int n_side = g_.n(side_);
  const int n_other = g_.n(opposite(side_));
  const int d = g_.degree();
  const Side other = opposite(side_);

  // Candidates for every boundary size at once: the cap is monotone in w, so keep
  // the least |B| per F and filter per w below.
  const int cap = std::min(candidate_size_cap(n_other, d), n_side);
  const CandidateCatalog cat = method_ == CandidateMethod::connected
                                   ? catalog_connected(g_, side_, v, cap)
                                   : catalog_walk(g_, side_, v, cap, candidate_walk_length(n_other, d), 50'000'000);
  stats_.candidate_sets += cat.size();

  std::unordered_set<BitSet, BitSetHash> boundaries;
  std::vector<int> members;
  for (const auto& [f, min_b] : cat) {
    const int f_size = static_cast<int>(f.count());
    // N^2(F) \ F on the boundary side.
    const BitSet second = neighborhood_bits(g_, side_, neighborhood_bits(g_, other, f)) - f;
    members = second.members();
    const int m = static_cast<int>(members.size());
    for (int k = 0; k <= m; ++k) {
      const int w = f_size + k;
      if (w > n_other) break;
      if (k > extension_budget(w, d, p_.C1)) continue;
      if (candidate_size_cap(w, d) < min_b) continue;
      // All k-subsets of N^2(F) \ F.
      std::vector<int> idx(static_cast<std::size_t>(k));
      std::iota(idx.begin(), idx.end(), 0);
      while (true) {
        BitSet wset = f;
        for (int i : idx) wset.set(static_cast<std::size_t>(members[static_cast<std::size_t>(i)]));
        ++stats_.boundaries_listed;
        boundaries.insert(std::move(wset));
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - k + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
  }
  stats_.distinct_boundaries += boundaries.size();

  Anchor out;
  out.by_size.assign(static_cast<std::size_t>(n_side + 1), {});
  std::vector<std::vector<BitSet>> found(static_cast<std::size_t>(n_side + 1));
  for (const BitSet& wset : boundaries) {
    BitSet a(static_cast<std::size_t>(n_side));
    for (int u = 0; u < n_side; ++u)
      if (g_.row(side_, u).subset_of(wset)) a.set(static_cast<std::size_t>(u));
    if (!a.test(static_cast<std::size_t>(v))) continue;
    if (!(neighborhood_bits(g_, side_, a) == wset)) continue;
    const int a_size = static_cast<int>(a.count());
    const int w = static_cast<int>(wset.count());
    const auto [lo, hi] = boundary_size_range(a_size, n_other, d, p_.C1);
    if (w < lo || w > hi) continue;
    if (is_expanding_sizes(w, a_size, d, p_.C1)) continue;
    if (!is_two_linked(g_, SideSet(side_, a))) continue;
    found[static_cast<std::size_t>(a_size)].push_back(std::move(a));
  }
  for (int a = 0; a <= n_side; ++a)
    out.by_size[static_cast<std::size_t>(a)] = sorted_sets(side_, std::move(found[static_cast<std::size_t>(a)]));
  return anchors_.emplace(v, std::move(out)).first->second;
}

std::vector<SideSet> NonExpandingEnumerator::enumerate(int v, int a) {
  if (a < 1) throw InvalidArgument("set size a must be at least 1");
  if (v < 0 || v >= g_.n(side_)) throw InvalidArgument("anchor vertex out of range");
  if (a > g_.n(side_)) return {};
  return anchor(v).by_size[static_cast<std::size_t>(a)];
}

std::vector<SideSet> enumerate_nonexpanding_closed(const BipartiteGraph& g, Side side, int v, int a,
                                                   const ExpansionParams& p) {
  NonExpandingEnumerator e(g, side, p);
  return e.enumerate(v, a);
}

// ---------------------------------------------------------------------------
// Certificates

std::vector<int> identity_ordering(int n) {
  std::vector<int> o(static_cast<std::size_t>(n));
  std::iota(o.begin(), o.end(), 0);
  return o;
}

namespace {

std::vector<int> resolve_ordering(const SimpleGraph& g, const std::vector<int>& ordering) {
  if (ordering.empty()) return identity_ordering(g.size());
  if (static_cast<int>(ordering.size()) != g.size()) throw InvalidArgument("ordering must list every vertex once");
  std::vector<char> seen(ordering.size(), 0);
  for (int v : ordering) {
    if (v < 0 || v >= g.size() || seen[static_cast<std::size_t>(v)]) throw InvalidArgument("ordering must list every vertex once");
    seen[static_cast<std::size_t>(v)] = 1;
  }
  return ordering;
}

// argmax of d_V(v) over v in V, earliest in the ordering on ties; -1 when V is empty.
int select_vertex(const SimpleGraph& g, const BitSet& alive, const std::vector<int>& ordering) {
  int best = -1;
  std::size_t best_deg = 0;
  for (int v : ordering) {
    if (!alive.test(static_cast<std::size_t>(v))) continue;
    const std::size_t deg = g.row(v).intersection_count(alive);
    if (best < 0 || deg > best_deg) {
      best = v;
      best_deg = deg;
    }
  }
  return best;
}

}  // namespace

Certificate compute_certificate(const SimpleGraph& g, const BitSet& independent, int T, const std::vector<int>& ordering) {
  if (static_cast<int>(independent.universe()) != g.size()) throw InvalidArgument("set universe does not match graph");
  if (!g.is_independent(independent)) throw InvalidArgument("input set is not independent");
  if (T < 0 || static_cast<int>(independent.count()) < T) throw InvalidArgument("independent set smaller than T");
  Certificate c;
  c.T = T;
  c.ordering = resolve_ordering(g, ordering);
  c.xi.assign(static_cast<std::size_t>(g.size()), 0);
  BitSet alive = BitSet::full(static_cast<std::size_t>(g.size()));
  int t = 0;
  while (t < T) {
    const int v = select_vertex(g, alive, c.ordering);
    if (independent.test(static_cast<std::size_t>(v))) {
      alive.reset(static_cast<std::size_t>(v));
      alive -= g.row(v);
      c.xi[static_cast<std::size_t>(c.steps)] = 1;
      ++t;
    } else {
      alive.reset(static_cast<std::size_t>(v));
    }
    ++c.steps;
  }
  return c;
}

CertificateRegion certificate_region(const SimpleGraph& g, const Certificate& c) {
  if (static_cast<int>(c.xi.size()) != g.size()) throw MalformedCertificate("certificate length differs from vertex count");
  const int ones = static_cast<int>(std::count(c.xi.begin(), c.xi.end(), std::uint8_t{1}));
  if (ones != c.T) throw MalformedCertificate("certificate has " + std::to_string(ones) + " ones, expected T = " + std::to_string(c.T));
  for (auto bit : c.xi)
    if (bit > 1) throw MalformedCertificate("certificate entries must be 0 or 1");
  const std::vector<int> ordering = resolve_ordering(g, c.ordering);
  CertificateRegion r{BitSet::full(static_cast<std::size_t>(g.size())), BitSet(static_cast<std::size_t>(g.size()))};
  int t = 0;
  for (int i = 0; t < c.T; ++i) {
    const int v = select_vertex(g, r.region, ordering);
    if (v < 0) throw MalformedCertificate("certificate runs past an empty vertex set at step " + std::to_string(i));
    r.region.reset(static_cast<std::size_t>(v));
    if (c.xi[static_cast<std::size_t>(i)]) {
      r.region -= g.row(v);
      r.forced.set(static_cast<std::size_t>(v));
      ++t;
    }
  }
  return r;
}

namespace {

BigInt count_up_to(const SimpleGraph& g, const BitSet& alive, int budget) {
  if (budget == 0) return 1;
  const std::size_t v = alive.first();
  if (v == BitSet::npos) return 1;
  BitSet without = alive;
  without.reset(v);
  return count_up_to(g, without, budget) + count_up_to(g, without - g.row(static_cast<int>(v)), budget - 1);
}

}  // namespace

BigInt count_small_independent_sets(const SimpleGraph& g, int T) {
  if (T <= 0) return 0;
  return count_up_to(g, BitSet::full(static_cast<std::size_t>(g.size())), T - 1);
}

CertificateCount count_via_certificates(const SimpleGraph& g, int T, const ExactCounter& counter,
                                        const std::vector<int>& ordering, std::uint64_t max_certificates) {
  if (T < 0) throw InvalidArgument("T must be nonnegative");
  const std::vector<int> order = resolve_ordering(g, ordering);
  const ExactCounter count = counter ? counter : ExactCounter([](const SimpleGraph& h, const BitSet& alive) {
    return exact_count_general(h, alive);
  });
  CertificateCount out;
  out.region_histogram.assign(static_cast<std::size_t>(g.size() + 1), 0);
  out.below_T = count_small_independent_sets(g, T);
  std::function<void(const BitSet&, int)> branch = [&](const BitSet& alive, int ones) {
    if (ones == T) {
      if (++out.certificates > max_certificates)
        throw CapacityError("more than " + std::to_string(max_certificates) + " certificates");
      out.at_least_T += count(g, alive);
      const std::size_t size = alive.count();
      out.max_region = std::max(out.max_region, size);
      ++out.region_histogram[size];
      return;
    }
    const int v = select_vertex(g, alive, order);
    if (v < 0) return;  // no certificate completes from here
    BitSet next = alive;
    next.reset(static_cast<std::size_t>(v));
    branch(next - g.row(v), ones + 1);
    branch(next, ones);
  };
  branch(BitSet::full(static_cast<std::size_t>(g.size())), 0);
  return out;
}

double region_bound(int n_total, int d) {
  return n_total / 2.0 + 4.0 * n_total * std::log(static_cast<double>(d)) / d;
}

}  // namespace bisc
