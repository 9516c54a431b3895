#include "bisc/polymer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bisc/connected_sets.hpp"
#include "bisc/errors.hpp"

namespace bisc {

namespace {

using Wide = __int128;

Rational pow2_signed(long e) {
  if (e >= 0) return Rational(pow2(static_cast<unsigned>(e)));
  return Rational(BigInt(1), pow2(static_cast<unsigned>(-e)));
}

std::optional<int> exact_log2_int(int d) {
  if (d <= 0 || (d & (d - 1)) != 0) return std::nullopt;
  return std::countr_zero(static_cast<unsigned>(d));
}

}  // namespace

bool PolymerFamily::admits_sizes(const BipartiteGraph& g, int boundary, int closure_size) const {
  if (membership == Membership::small) return 2 * closure_size <= g.n(side);
  return is_expanding_sizes(boundary, closure_size, g.degree(), params.C1);
}

bool PolymerFamily::admits(const BipartiteGraph& g, const SideSet& a) const {
  if (a.side != side) throw InvalidArgument("set lies on the wrong side for this family");
  if (a.empty()) return false;
  return admits_sizes(g, static_cast<int>(neighborhood(g, a).size()), static_cast<int>(closure(g, a).size()));
}

bool PolymerFamily::trivially_empty(const BipartiteGraph& g) const {
  if (membership == Membership::small) return 2 > g.n(side);
  // |N(A)| - |[A]| < |N(A)| for nonempty A, so the threshold can never be met.
  return (params.C1 / 2.0) * log2sq_over_d(g.degree()) >= 1.0;
}

Polymer make_polymer(const BipartiteGraph& g, SideSet vertices) {
  SideSet b = neighborhood(g, vertices);
  return Polymer{std::move(vertices), std::move(b)};
}

bool are_compatible(const Polymer& a, const Polymer& b) {
  if (a.vertices.side != b.vertices.side) throw InvalidArgument("polymers lie on different sides");
  return !a.boundary.bits.intersects(b.boundary.bits);
}

WeightModel WeightModel::hardcore(const Rational& lambda) {
  if (lambda <= 0) throw InvalidArgument("fugacity must be positive");
  return {WeightKind::hardcore, lambda, to_double(lambda), std::nullopt, 0.0};
}

WeightModel WeightModel::hardcore_float(double lambda) {
  if (!(lambda > 0) || !std::isfinite(lambda)) throw InvalidArgument("fugacity must be positive");
  return {WeightKind::hardcore, std::nullopt, lambda, std::nullopt, 0.0};
}

WeightModel WeightModel::tilde_hardcore(const Rational& lambda, double c, std::optional<Rational> c_exact) {
  if (lambda <= 0) throw InvalidArgument("fugacity must be positive");
  return {WeightKind::tilde_hardcore, lambda, to_double(lambda), std::move(c_exact), c};
}

std::optional<Rational> WeightModel::exact_fill_probability() const {
  if (kind == WeightKind::unweighted || kind == WeightKind::tilde_unweighted) return Rational(1, 2);
  if (!lambda) return std::nullopt;
  return Rational(*lambda / (1 + *lambda));
}

double WeightModel::log_weight(int size, int boundary, int d) const {
  const double ln2 = std::log(2.0);
  switch (kind) {
    case WeightKind::unweighted:
      return -boundary * ln2;
    case WeightKind::tilde_unweighted:
      return (-boundary + size * log2sq_over_d(d)) * ln2;
    case WeightKind::hardcore:
    case WeightKind::tilde_hardcore: {
      double lw = size * std::log(lambda_value) - boundary * std::log1p(lambda_value);
      if (kind == WeightKind::tilde_hardcore) lw += size * tilde * ln2;
      return lw;
    }
  }
  return 0.0;
}

std::optional<Rational> WeightModel::exact_weight(int size, int boundary, int d) const {
  switch (kind) {
    case WeightKind::unweighted:
      return pow2_signed(-boundary);
    case WeightKind::tilde_unweighted: {
      const auto k = exact_log2_int(d);
      if (!k) return std::nullopt;
      const long num = static_cast<long>(size) * *k * *k;
      if (num % d != 0) return std::nullopt;
      return pow2_signed(num / d - boundary);
    }
    case WeightKind::hardcore:
    case WeightKind::tilde_hardcore: {
      if (!lambda) return std::nullopt;
      Rational w = pow(*lambda, static_cast<unsigned>(size)) / pow(Rational(1 + *lambda), static_cast<unsigned>(boundary));
      if (kind == WeightKind::tilde_hardcore) {
        if (!tilde_exact) return std::nullopt;
        const Rational e = *tilde_exact * size;
        if (denominator(e) != 1) return std::nullopt;
        w *= pow2_signed(numerator(e).convert_to<long>());
      }
      return w;
    }
  }
  return std::nullopt;
}

int PolymerUniverse::total_size() const {
  int t = 0;
  for (const auto& p : polymers) t += p.size();
  return t;
}

namespace {

std::vector<BitSet> incompatibility(const std::vector<Polymer>& ps, int other_size) {
  const std::size_t n = ps.size();
  std::vector<BitSet> by_vertex(static_cast<std::size_t>(other_size), BitSet(n));
  for (std::size_t i = 0; i < n; ++i)
    ps[i].boundary.bits.for_each([&](std::size_t y) { by_vertex[y].set(i); });
  std::vector<BitSet> inc(n, BitSet(n));
  for (std::size_t i = 0; i < n; ++i) {
    ps[i].boundary.bits.for_each([&](std::size_t y) { inc[i] |= by_vertex[y]; });
    inc[i].reset(i);
  }
  return inc;
}

}  // namespace

PolymerUniverse PolymerUniverse::restricted(const BitSet& allowed) const {
  PolymerUniverse out;
  out.family = family;
  out.size_cap = size_cap;
  std::vector<int> remap(polymers.size(), -1);
  for (std::size_t i = 0; i < polymers.size(); ++i)
    if (polymers[i].vertices.bits.subset_of(allowed)) {
      remap[i] = static_cast<int>(out.polymers.size());
      out.polymers.push_back(polymers[i]);
    }
  const std::size_t m = out.polymers.size();
  out.incompatible.assign(m, BitSet(m));
  for (std::size_t i = 0; i < polymers.size(); ++i) {
    if (remap[i] < 0) continue;
    incompatible[i].for_each([&](std::size_t j) {
      if (remap[j] >= 0) out.incompatible[static_cast<std::size_t>(remap[i])].set(static_cast<std::size_t>(remap[j]));
    });
  }
  return out;
}

PolymerUniverse enumerate_polymers(const BipartiteGraph& g, const PolymerFamily& fam, int size_cap,
                                   const BitSet* allowed, std::size_t max_polymers) {
  PolymerUniverse u;
  u.family = fam;
  u.size_cap = std::max(size_cap, 0);
  if (size_cap <= 0 || fam.trivially_empty(g)) return u;

  const Side s = fam.side;
  const int n = g.n(s);
  std::vector<BitSet> adjacency;
  adjacency.reserve(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) adjacency.push_back(g.square_row(s, v));
  BitSet pool = allowed ? *allowed : BitSet::full(static_cast<std::size_t>(n));
  if (pool.universe() != static_cast<std::size_t>(n)) throw InvalidArgument("allowed set has the wrong universe");

  std::uint64_t examined = 0;
  for (int root = 0; root < n; ++root) {
    if (!pool.test(static_cast<std::size_t>(root))) continue;
    BitSet rooted = pool;
    for (int v = 0; v < root; ++v) rooted.reset(static_cast<std::size_t>(v));
    for_each_connected_set(std::span<const BitSet>(adjacency), static_cast<std::size_t>(root), rooted, {}, size_cap,
                           [&](const BitSet& b) {
                             ++examined;
                             SideSet a(s, b);
                             SideSet w = neighborhood(g, a);
                             const int cl = static_cast<int>(closure(g, a).size());
                             if (fam.admits_sizes(g, static_cast<int>(w.size()), cl)) {
                               if (u.polymers.size() >= max_polymers)
                                 throw CapacityError("polymer universe exceeds " + std::to_string(max_polymers) +
                                                     " polymers (found so far: " +
                                                     std::to_string(u.polymers.size()) + ", sets examined: " +
                                                     std::to_string(examined) + ")");
                               u.polymers.push_back(Polymer{std::move(a), std::move(w)});
                             }
                             return true;
                           });
  }
  std::sort(u.polymers.begin(), u.polymers.end(), [](const Polymer& a, const Polymer& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.vertices.bits < b.vertices.bits;
  });
  u.incompatible = incompatibility(u.polymers, g.n(opposite(s)));
  return u;
}

PolymerUniverse make_universe(const BipartiteGraph& g, const PolymerFamily& fam, std::vector<SideSet> sets,
                              int size_cap) {
  std::sort(sets.begin(), sets.end(), [](const SideSet& a, const SideSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.bits < b.bits;
  });
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  PolymerUniverse u;
  u.family = fam;
  u.size_cap = size_cap;
  for (auto& s : sets) {
    if (s.side != fam.side) throw InvalidArgument("polymer lies on the wrong side");
    u.polymers.push_back(make_polymer(g, std::move(s)));
  }
  u.incompatible = incompatibility(u.polymers, g.n(opposite(fam.side)));
  return u;
}

std::vector<SideSet> enumerate_subgraph_polymers(const BipartiteGraph& g, const PolymerFamily& fam,
                                                 const BitSet& allowed, const BitSet& allowed_other, int size_cap,
                                                 std::size_t max_polymers) {
  std::vector<SideSet> out;
  if (size_cap <= 0 || fam.trivially_empty(g)) return out;
  const Side s = fam.side;
  const Side t = opposite(s);
  const int n = g.n(s);
  std::vector<BitSet> nbr(static_cast<std::size_t>(n), BitSet(static_cast<std::size_t>(g.n(t))));
  std::vector<BitSet> sq(static_cast<std::size_t>(n), BitSet(static_cast<std::size_t>(n)));
  allowed.for_each([&](std::size_t v) { nbr[v] = g.row(s, static_cast<int>(v)) & allowed_other; });
  allowed.for_each([&](std::size_t v) {
    nbr[v].for_each([&](std::size_t y) { sq[v] |= g.row(t, static_cast<int>(y)); });
    sq[v] &= allowed;
    sq[v].reset(v);
  });
  for (std::size_t root = allowed.first(); root != BitSet::npos; root = allowed.next(root + 1)) {
    BitSet rooted = allowed;
    for (std::size_t v = 0; v < root; ++v) rooted.reset(v);
    for_each_connected_set(std::span<const BitSet>(sq), root, rooted, {}, size_cap, [&](const BitSet& b) {
      BitSet w(static_cast<std::size_t>(g.n(t)));
      b.for_each([&](std::size_t v) { w |= nbr[v]; });
      int cl = 0;
      allowed.for_each([&](std::size_t u) { cl += nbr[u].subset_of(w) ? 1 : 0; });
      if (fam.admits_sizes(g, static_cast<int>(w.count()), cl)) {
        if (out.size() >= max_polymers)
          throw CapacityError("subgraph polymer universe exceeds " + std::to_string(max_polymers) + " polymers");
        out.emplace_back(s, b);
      }
      return true;
    });
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t ursell(const std::vector<std::uint32_t>& adjacency, int cap) {
  const int k = static_cast<int>(adjacency.size());
  if (k > cap || k > 24) throw CapacityError("Ursell function limited to " + std::to_string(std::min(cap, 24)) + " vertices");
  if (k == 0) return 0;
  const std::uint32_t full = (k == 32) ? ~0U : ((1U << k) - 1);
  std::vector<std::uint8_t> indep(std::size_t{1} << k, 0);
  indep[0] = 1;
  for (std::uint32_t s = 1; s <= full; ++s) {
    const int v = std::countr_zero(s);
    const std::uint32_t rest = s & (s - 1);
    indep[s] = indep[rest] && !(adjacency[static_cast<std::size_t>(v)] & rest);
  }
  // C(S) = I(S) - sum_{T < S, min S in T} C(T) I(S \ T)
  std::vector<Wide> c(std::size_t{1} << k, 0);
  for (std::uint32_t s = 1; s <= full; ++s) {
    const std::uint32_t low = s & (~s + 1);
    const std::uint32_t rest = s ^ low;
    Wide acc = indep[s];
    for (std::uint32_t sub = (rest - 1) & rest;; sub = (sub - 1) & rest) {
      // T = low | sub ranges over proper subsets containing low
      const std::uint32_t tset = low | sub;
      if (indep[s ^ tset]) acc -= c[tset];
      if (sub == 0) break;
    }
    c[s] = rest == 0 ? Wide{1} : acc;
  }
  const Wide r = c[full];
  if (r > INT64_MAX || r < INT64_MIN) throw CapacityError("Ursell value overflows 64 bits");
  return static_cast<std::int64_t>(r);
}

std::int64_t ursell_multiset(const std::vector<std::uint32_t>& types_incompatible,
                             const std::vector<int>& multiplicities, int cap) {
  const std::size_t s = multiplicities.size();
  if (s == 0) return 0;
  if (s > 32) throw CapacityError("at most 32 distinct polymers per cluster");
  int total = 0;
  for (int m : multiplicities) {
    if (m < 1) throw InvalidArgument("multiplicities must be positive");
    total += m;
  }
  if (total > cap) throw CapacityError("cluster of " + std::to_string(total) + " polymers exceeds cap " +
                                       std::to_string(cap));
  static thread_local std::vector<std::vector<Wide>> binom;
  if (binom.size() < static_cast<std::size_t>(total + 1)) {
    binom.assign(static_cast<std::size_t>(total + 1), {});
    for (int a = 0; a <= total; ++a) {
      binom[static_cast<std::size_t>(a)].assign(static_cast<std::size_t>(a + 1), 1);
      for (int b = 1; b < a; ++b)
        binom[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
            binom[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)] +
            binom[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b)];
    }
  }
  // Mixed-radix profiles p <= m; sub-profiles have smaller indices.
  std::vector<std::size_t> stride(s);
  std::size_t states = 1;
  for (std::size_t i = 0; i < s; ++i) {
    stride[i] = states;
    states *= static_cast<std::size_t>(multiplicities[i] + 1);
  }
  std::vector<int> digits(s);
  auto decode = [&](std::size_t idx, std::vector<int>& out) {
    for (std::size_t i = 0; i < s; ++i) {
      out[i] = static_cast<int>(idx % static_cast<std::size_t>(multiplicities[i] + 1));
      idx /= static_cast<std::size_t>(multiplicities[i] + 1);
    }
  };
  // I(q): 1 iff q has no repeated type and its support is pairwise compatible.
  std::vector<std::uint8_t> indep(states, 0);
  for (std::size_t idx = 0; idx < states; ++idx) {
    decode(idx, digits);
    std::uint32_t support = 0;
    bool ok = true;
    for (std::size_t i = 0; i < s && ok; ++i) {
      if (digits[i] >= 2) ok = false;
      if (digits[i] == 1) {
        if (types_incompatible[i] & support) ok = false;
        support |= 1U << i;
      }
    }
    indep[idx] = ok;
  }
  std::vector<Wide> c(states, 0);
  std::vector<int> sub(s);
  for (std::size_t idx = 1; idx < states; ++idx) {
    decode(idx, digits);
    std::size_t i0 = 0;
    while (digits[i0] == 0) ++i0;
    Wide acc = indep[idx];
    // Iterate t <= p with t[i0] >= 1, t != p.
    std::fill(sub.begin(), sub.end(), 0);
    sub[i0] = 1;
    while (true) {
      std::size_t tidx = 0;
      for (std::size_t i = 0; i < s; ++i) tidx += stride[i] * static_cast<std::size_t>(sub[i]);
      if (tidx != idx && indep[idx - tidx]) {
        Wide ways = binom[static_cast<std::size_t>(digits[i0] - 1)][static_cast<std::size_t>(sub[i0] - 1)];
        for (std::size_t i = 0; i < s; ++i)
          if (i != i0) ways *= binom[static_cast<std::size_t>(digits[i])][static_cast<std::size_t>(sub[i])];
        acc -= ways * c[tidx];
      }
      std::size_t i = 0;
      while (i < s) {
        const int lo = (i == i0) ? 1 : 0;
        if (sub[i] < digits[i]) {
          ++sub[i];
          break;
        }
        sub[i] = lo;
        ++i;
      }
      if (i == s) break;
    }
    c[idx] = acc;
  }
  const Wide r = c[states - 1];
  if (r > INT64_MAX || r < INT64_MIN) throw CapacityError("Ursell value overflows 64 bits");
  return static_cast<std::int64_t>(r);
}

void for_each_cluster(const BipartiteGraph& g, const PolymerUniverse& u, const WeightModel& m, int ell,
                      const ClusterOptions& opts, const std::function<bool(const ClusterTerm&)>& visit) {
  const std::size_t count = u.count();
  if (ell < 1 || count == 0) return;
  const int d = g.degree();
  std::vector<int> sizes(count);
  std::vector<double> logw(count);
  std::vector<std::optional<Rational>> exact_w(count);
  for (std::size_t i = 0; i < count; ++i) {
    sizes[i] = u.polymers[i].size();
    logw[i] = m.log_weight(u.polymers[i], d);
    if (opts.exact) {
      exact_w[i] = m.exact_weight(u.polymers[i], d);
      if (!exact_w[i]) throw InvalidArgument("exact cluster terms need rational weights");
    }
  }
  std::vector<double> log_factorial(static_cast<std::size_t>(opts.max_multiplicity_total + 2), 0.0);
  for (std::size_t k = 1; k < log_factorial.size(); ++k)
    log_factorial[k] = log_factorial[k - 1] + std::log(static_cast<double>(k));

  std::uint64_t produced = 0;
  bool stopped = false;
  ClusterTerm term;

  for (std::size_t root = 0; root < count && !stopped; ++root) {
    if (sizes[root] > ell) continue;
    BitSet allowed = BitSet::full(count);
    for (std::size_t j = 0; j < root; ++j) allowed.reset(j);
    for_each_connected_set(
        std::span<const BitSet>(u.incompatible), root, allowed, std::span<const int>(sizes), ell,
        [&](const BitSet& support) {
          const std::vector<int> ids = support.members();
          const std::size_t k = ids.size();
          if (k > 32) throw CapacityError("cluster support exceeds 32 polymers");
          std::vector<std::uint32_t> types(k, 0);
          int base = 0;
          for (std::size_t a = 0; a < k; ++a) {
            base += sizes[static_cast<std::size_t>(ids[a])];
            for (std::size_t b = 0; b < k; ++b)
              if (a != b && u.incompatible[static_cast<std::size_t>(ids[a])].test(static_cast<std::size_t>(ids[b])))
                types[a] |= 1U << b;
          }
          BitSet vertex_union(static_cast<std::size_t>(g.n(u.family.side)));
          for (int id : ids) vertex_union |= u.polymers[static_cast<std::size_t>(id)].vertices.bits;
          std::vector<int> mult(k, 1);
          // Extra copies: distribute the remaining budget ell - base.
          std::function<bool(std::size_t, int, int)> extend = [&](std::size_t pos, int used, int copies) -> bool {
            if (pos == k) {
              if (copies > opts.max_multiplicity_total)
                throw CapacityError("cluster with " + std::to_string(copies) + " polymers exceeds cap");
              if (++produced > opts.max_clusters)
                throw CapacityError("more than " + std::to_string(opts.max_clusters) + " clusters");
              term.ids = ids;
              term.multiplicities = mult;
              term.size = used;
              term.phi = ursell_multiset(types, mult, opts.max_multiplicity_total);
              double lw = 0.0;
              for (std::size_t a = 0; a < k; ++a)
                lw += mult[a] * logw[static_cast<std::size_t>(ids[a])] -
                      log_factorial[static_cast<std::size_t>(mult[a])];
              term.term = static_cast<double>(term.phi) * std::exp(lw);
              if (opts.exact) {
                Rational t(term.phi);
                for (std::size_t a = 0; a < k; ++a) {
                  t *= pow(*exact_w[static_cast<std::size_t>(ids[a])], static_cast<unsigned>(mult[a]));
                  BigInt f = 1;
                  for (int q = 2; q <= mult[a]; ++q) f *= q;
                  t /= f;
                }
                term.exact_term = std::move(t);
              } else {
                term.exact_term.reset();
              }
              term.support = vertex_union;
              if (!visit(term)) {
                stopped = true;
                return false;
              }
              return true;
            }
            const int sz = sizes[static_cast<std::size_t>(ids[pos])];
            for (int extra = 0; used + extra * sz <= ell; ++extra) {
              mult[pos] = 1 + extra;
              if (!extend(pos + 1, used + extra * sz, copies + extra)) return false;
            }
            mult[pos] = 1;
            return true;
          };
          return extend(0, base, static_cast<int>(k));
        });
  }
}

std::vector<ClusterTerm> enumerate_clusters(const BipartiteGraph& g, const PolymerUniverse& u, const WeightModel& m,
                                            int ell, const ClusterOptions& opts) {
  std::vector<ClusterTerm> out;
  for_each_cluster(g, u, m, ell, opts, [&](const ClusterTerm& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

}  // namespace bisc
