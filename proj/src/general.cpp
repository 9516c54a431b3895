#include "bisc/general.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "bisc/errors.hpp"

namespace bisc {

void check_nonexpanding_closed(const BipartiteGraph& g, const SideSet& a, const ExpansionParams& p) {
  if (a.empty()) throw InvalidArgument("set must be nonempty");
  if (!(closure(g, a) == a)) throw InvalidArgument("set is not closed");
  if (!is_two_linked(g, a)) throw InvalidArgument("set is not 2-linked");
  if (is_expanding(g, a, p)) throw InvalidArgument("set is expanding");
}

std::vector<SideSet> closed_nonexpanding_sets(const BipartiteGraph& g, Side side, const ExpansionParams& p,
                                              CandidateMethod method, NonExpandingStats* stats) {
  NonExpandingEnumerator e(g, side, p, method);
  std::vector<SideSet> out;
  const int n = g.n(side);
  for (int v = 0; v < n; ++v)
    for (int a = 1; a <= n; ++a)
      for (auto& s : e.enumerate(v, a))
        if (s.bits.first() == static_cast<std::size_t>(v)) out.push_back(std::move(s));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const SideSet& a, const SideSet& b) { return a.bits.first() < b.bits.first(); });
  if (stats) *stats = e.stats();
  return out;
}

std::vector<NonExpandingFamily> enumerate_families(const BipartiteGraph& g, const ExpansionParams& p,
                                                   const FamilyOptions& opts, FamilyCensus* census) {
  p.validate();
  FamilyCensus local;
  const auto sets = closed_nonexpanding_sets(g, opts.side, p, opts.method, &local.enumerator);
  local.closed_sets = sets.size();
  std::vector<SideSet> nbhd;
  nbhd.reserve(sets.size());
  for (const auto& s : sets) nbhd.push_back(neighborhood(g, s));

  std::vector<NonExpandingFamily> out;
  std::set<std::vector<int>> size_vectors;
  std::vector<int> chosen;
  BitSet used(static_cast<std::size_t>(g.n(opposite(opts.side))));
  auto emit = [&] {
    if (out.size() >= opts.max_families)
      throw CapacityError("more than " + std::to_string(opts.max_families) + " non-expanding families");
    NonExpandingFamily f;
    std::vector<int> sizes;
    for (int i : chosen) {
      const auto& s = sets[static_cast<std::size_t>(i)];
      f.sets.push_back(s);
      f.anchors.push_back(static_cast<int>(s.bits.first()));
      f.sizes.push_back(static_cast<int>(s.size()));
    }
    sizes = f.sizes;
    std::sort(sizes.begin(), sizes.end());
    size_vectors.insert(sizes);
    if (local.by_count.size() <= f.count()) local.by_count.resize(f.count() + 1, 0);
    ++local.by_count[f.count()];
    out.push_back(std::move(f));
  };
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    emit();
    for (std::size_t i = from; i < sets.size(); ++i) {
      if (nbhd[i].bits.intersects(used)) continue;
      used |= nbhd[i].bits;
      chosen.push_back(static_cast<int>(i));
      rec(i + 1);
      chosen.pop_back();
      used -= nbhd[i].bits;
    }
  };
  rec(0);
  local.families = out.size();
  local.size_vectors = size_vectors.size();
  if (census) *census = local;
  return out;
}

BigInt count_D(const BipartiteGraph& g, const SideSet& a, int cap) {
  const auto verts = a.members();
  if (static_cast<int>(verts.size()) > cap) throw CapacityError("D(A) enumeration limited to |A| <= " + std::to_string(cap));
  const SideSet target = neighborhood(g, a);
  BigInt count = 0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << verts.size()); ++mask) {
    SideSet b = g.empty_set(a.side);
    for (std::size_t i = 0; i < verts.size(); ++i)
      if ((mask >> i) & 1U) b.bits.set(static_cast<std::size_t>(verts[i]));
    if (neighborhood(g, b) == target && is_two_linked(g, b)) ++count;
  }
  return count;
}

std::uint64_t d_sample_count(double eps, double delta, int a_double_prime) {
  if (!(eps > 0) || !(delta > 0) || !(delta < 1)) throw InvalidArgument("need eps > 0 and delta in (0, 1)");
  const double e = std::min(eps, 1.0);
  const double n = std::ceil(3.0 / (e * e) * std::log(2.0 / delta) * std::exp2(a_double_prime));
  if (n > 1.8e19) throw CapacityError("sample count overflows");
  return static_cast<std::uint64_t>(n);
}

DEstimate estimate_D(const BipartiteGraph& g, const SideSet& a, const ExpansionParams& p, double eps, double delta,
                     std::uint64_t seed, std::uint64_t max_samples) {
  check_nonexpanding_closed(g, a, p);
  const SmallGenerator gen = small_generator(g, a, p);
  DEstimate out;
  out.epsilon = eps;
  out.delta = delta;
  out.a_double_prime = static_cast<int>(gen.a_double_prime.size());
  out.p_lower = std::exp2(-out.a_double_prime);
  out.samples_used = d_sample_count(eps, delta, out.a_double_prime);
  if (out.samples_used > max_samples)
    throw CapacityError("D estimate needs " + std::to_string(out.samples_used) + " samples");

  const auto verts = a.members();
  const BitSet target = neighborhood(g, a).bits;
  const Side s = a.side;
  std::mt19937_64 rng(seed);
  BitSet nb(target.universe());
  SideSet b = g.empty_set(s);
  // B is uniform over the nonempty subsets; the empty set never hits.
  for (std::uint64_t t = 0; t < out.samples_used; ++t) {
    do {
      nb.clear();
      b.bits.clear();
      std::uint64_t word = 0;
      for (std::size_t i = 0; i < verts.size(); ++i) {
        if (i % 64 == 0) word = rng();
        if ((word >> (i % 64)) & 1U) {
          const auto v = static_cast<std::size_t>(verts[i]);
          b.bits.set(v);
          nb |= g.row(s, static_cast<int>(v));
        }
      }
    } while (b.empty());
    if (nb == target && is_two_linked(g, b)) ++out.hits;
  }
  const double subsets = std::exp2(static_cast<double>(verts.size())) - 1.0;
  // A itself always hits, so 1 is a sure lower bound.
  out.value = std::clamp(static_cast<double>(out.hits) / static_cast<double>(out.samples_used) * subsets, 1.0, subsets);
  return out;
}

int general_ell(int n, int d, double eps) {
  if (d < 2) throw InvalidArgument("the truncation length needs d >= 2");
  if (!(eps > 0)) throw InvalidArgument("epsilon must be positive");
  const double l = std::log2(static_cast<double>(d));
  const double v = d / (2.0 * l * l) * std::log2(2.0 * n / eps);
  return std::max(1, static_cast<int>(std::ceil(v - 1e-9)));
}

namespace {

void check_restriction(const BipartiteGraph& g, const PolymerFamily& fam, const PolymerUniverse& full,
                       const BitSet& xa, const BitSet& ya, int cap, std::size_t max_polymers) {
  const auto sub = make_universe(g, fam, enumerate_subgraph_polymers(g, fam, xa, ya, cap, max_polymers), cap);
  const auto inside = full.restricted(xa);
  bool same = sub.count() == inside.count();
  for (std::size_t i = 0; same && i < sub.count(); ++i) same = sub.polymers[i].vertices == inside.polymers[i].vertices;
  if (!same) throw std::logic_error("restricted universe differs from the subgraph's own polymers");
}

}  // namespace

GeneralCount count_general(const BipartiteGraph& g, double eps, double delta, std::uint64_t seed,
                           const ExpansionParams& p, const GeneralOptions& opts) {
  if (!g.balanced()) throw InvalidArgument("general algorithm needs equal sides");
  if (!(eps > 0) || !std::isfinite(eps)) throw InvalidArgument("epsilon must be positive");
  if (!(delta > 0) || !(delta < 1)) throw InvalidArgument("delta must lie in (0, 1)");
  p.validate();
  const int n = g.balanced_n();
  const int d = g.degree();
  const Side side = opts.families.side;

  GeneralCount out;
  auto families = enumerate_families(g, p, opts.families, &out.census);
  out.distinct_sets = out.census.closed_sets;
  out.eps_d = eps / (2.0 * n);
  out.delta_d = delta / static_cast<double>(std::max<std::size_t>(1, out.distinct_sets));
  out.large_degree = !opts.exact && static_cast<long>(d) * d > n;
  if (!opts.exact || d >= 2) out.L = general_ell(n, d, eps);

  const auto fam = PolymerFamily::expanding(side, p);
  const bool empty_family = fam.trivially_empty(g);
  const WeightModel m = WeightModel::unweighted();
  const int cap = opts.exact ? n : out.L;

  PolymerUniverse universe;
  universe.family = fam;
  if (!empty_family && (opts.check_restriction || (!opts.exact && !out.large_degree)))
    universe = enumerate_polymers(g, fam, cap, nullptr, opts.max_polymers);
  std::optional<ClusterTable> table;
  if (!opts.exact && !out.large_degree && !empty_family) table.emplace(g, universe, m, out.L, opts.clusters);
  if (opts.verify_kp && !empty_family && d >= 2) {
    const auto rep = verify_kp(g, universe, m, KPFunctions::unweighted(d));
    out.count.kp_status = rep.all_pass ? KPStatus::verified_to_cap : KPStatus::violated;
  }

  std::map<SideSet, BigInt> exact_d;
  std::map<SideSet, double> log_d;
  Rational exact_sum = 0;
  double log_sum = -INFINITY;
  std::size_t max_count = 0;
  std::uint64_t next_seed = seed;
  for (const auto& f : families) {
    max_count = std::max(max_count, f.count());
    SideSet u = g.empty_set(side);
    for (const auto& s : f.sets) u.bits |= s.bits;
    const SideSet nu = neighborhood(g, u);
    const BitSet xa = neighborhood(g, nu).bits.complement();
    const BitSet ya = nu.bits.complement();
    const auto free_y = static_cast<unsigned>(ya.count());

    if (opts.check_restriction && !empty_family) {
      check_restriction(g, fam, universe, xa, ya, cap, opts.max_polymers);
      ++out.restriction_checks;
    }

    if (opts.exact) {
      Rational term = Rational(pow2(free_y));
      for (const auto& s : f.sets) {
        auto it = exact_d.find(s);
        if (it == exact_d.end()) it = exact_d.emplace(s, count_D(g, s)).first;
        term *= Rational(it->second);
      }
      if (!empty_family) term *= *exact_xi_subsets(g, fam, m, &xa, opts.exact_subset_cap).value;
      exact_sum += term;
      continue;
    }

    double lt = free_y * std::log(2.0);
    for (const auto& s : f.sets) {
      auto it = log_d.find(s);
      if (it == log_d.end()) {
        const DEstimate e = estimate_D(g, s, p, out.eps_d, out.delta_d, next_seed++, opts.max_samples);
        out.d_samples += e.samples_used;
        it = log_d.emplace(s, std::log(e.value)).first;
      }
      lt += it->second;
    }
    if (table) lt += table->log_xi_within(xa);
    log_sum = log_add(log_sum, lt);
  }

  ApproxCount& c = out.count;
  c.method = "general";
  c.ell = out.L;
  if (opts.exact) {
    c.exact_weighted = exact_sum;
    if (denominator(exact_sum) == 1) c.exact = numerator(exact_sum);
    c.log_value = log_of(exact_sum);
    c.rel_error_bound = eps;
    c.certified = true;
    c.notes.emplace_back("exact mode: exhaustive D and exact restricted partition functions");
    return out;
  }
  c.log_value = log_sum;
  if (table) c.log_xi_x = table->log_xi();
  double trunc = 0.0;
  if (!empty_family) {
    if (out.large_degree) {
      trunc = INFINITY;
      c.notes.emplace_back("d > sqrt(n): restricted partition functions replaced by 1 with no explicit bound");
    } else {
      trunc = certified_bound(n, d, out.L);
    }
  }
  c.rel_error_bound = std::pow(1.0 + out.eps_d, static_cast<double>(max_count)) * std::exp(trunc) - 1.0;
  c.certified = c.kp_status != KPStatus::violated && c.rel_error_bound < 1.0;
  c.notes.emplace_back("per-estimate failure probability delta / (number of distinct sets), holds with probability >= 1 - delta");
  return out;
}

}  // namespace bisc
