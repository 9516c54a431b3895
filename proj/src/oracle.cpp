#include "bisc/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include "bisc/errors.hpp"

namespace bisc {

namespace {

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Side smaller_side(const BipartiteGraph& g) { return g.nY() < g.nX() ? Side::Y : Side::X; }

}  // namespace

std::string fingerprint(const BipartiteGraph& g) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<std::uint64_t>(g.nX()));
  mix(static_cast<std::uint64_t>(g.nY()));
  mix(static_cast<std::uint64_t>(g.degree()));
  for (const auto& [x, y] : g.edges()) mix((static_cast<std::uint64_t>(x) << 32) | static_cast<std::uint64_t>(y));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::vector<std::uint64_t>> subset_neighborhood_histogram(const BipartiteGraph& g, Side side, int cap) {
  const int n = g.n(side);
  const int m = g.n(opposite(side));
  if (n > cap) throw CapacityError("subset sweep limited to " + std::to_string(cap) + " vertices per side");
  std::vector<std::vector<std::uint64_t>> hist(static_cast<std::size_t>(n + 1),
                                               std::vector<std::uint64_t>(static_cast<std::size_t>(m + 1), 0));
  std::vector<int> cover(static_cast<std::size_t>(m), 0);
  int covered = 0, size = 0;
  std::uint64_t in_set = 0;
  hist[0][0] = 1;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t i = 1; i < total; ++i) {
    const int v = std::countr_zero(i);
    const std::uint64_t bit = std::uint64_t{1} << v;
    if (in_set & bit) {
      in_set &= ~bit;
      --size;
      for (int u : g.neighbors(side, v))
        if (--cover[static_cast<std::size_t>(u)] == 0) --covered;
    } else {
      in_set |= bit;
      ++size;
      for (int u : g.neighbors(side, v))
        if (cover[static_cast<std::size_t>(u)]++ == 0) ++covered;
    }
    ++hist[static_cast<std::size_t>(size)][static_cast<std::size_t>(covered)];
  }
  return hist;
}

ExactCount exact_count_bipartite(const BipartiteGraph& g, int cap) {
  const auto t0 = std::chrono::steady_clock::now();
  const Side side = smaller_side(g);
  const int m = g.n(opposite(side));
  const auto hist = subset_neighborhood_histogram(g, side, cap);
  BigInt total = 0;
  for (const auto& row : hist)
    for (int k = 0; k <= m; ++k)
      if (row[static_cast<std::size_t>(k)]) total += BigInt(row[static_cast<std::size_t>(k)]) * pow2(static_cast<unsigned>(m - k));
  return ExactCount{total, fingerprint(g), elapsed_since(t0)};
}

Rational exact_hardcore(const BipartiteGraph& g, const Rational& lambda, int cap) {
  if (lambda <= 0) throw InvalidArgument("lambda must be positive");
  const Side side = smaller_side(g);
  const int n = g.n(side);
  const int m = g.n(opposite(side));
  const auto hist = subset_neighborhood_histogram(g, side, cap);
  std::vector<Rational> lam_pow(static_cast<std::size_t>(n + 1)), one_plus_pow(static_cast<std::size_t>(m + 1));
  lam_pow[0] = 1;
  for (int i = 1; i <= n; ++i) lam_pow[static_cast<std::size_t>(i)] = lam_pow[static_cast<std::size_t>(i - 1)] * lambda;
  one_plus_pow[0] = 1;
  for (int i = 1; i <= m; ++i) one_plus_pow[static_cast<std::size_t>(i)] = one_plus_pow[static_cast<std::size_t>(i - 1)] * (1 + lambda);
  Rational z = 0;
  for (int s = 0; s <= n; ++s)
    for (int k = 0; k <= m; ++k)
      if (auto c = hist[static_cast<std::size_t>(s)][static_cast<std::size_t>(k)])
        z += Rational(BigInt(c)) * lam_pow[static_cast<std::size_t>(s)] * one_plus_pow[static_cast<std::size_t>(m - k)];
  return z;
}

namespace {

BigInt count_alive(const SimpleGraph& g, const BitSet& alive) {
  const std::size_t start = alive.first();
  if (start == BitSet::npos) return 1;
  // Component of `start` within alive.
  BitSet comp(alive.universe()), frontier(alive.universe());
  frontier.set(start);
  while (frontier.any()) {
    comp |= frontier;
    BitSet next(alive.universe());
    frontier.for_each([&](std::size_t v) { next |= g.row(static_cast<int>(v)); });
    next &= alive;
    next -= comp;
    frontier = std::move(next);
  }
  if (!(comp == alive)) return count_alive(g, comp) * count_alive(g, alive - comp);
  std::size_t best = start;
  std::size_t best_deg = 0;
  alive.for_each([&](std::size_t v) {
    const std::size_t deg = g.row(static_cast<int>(v)).intersection_count(alive);
    if (deg > best_deg) {
      best_deg = deg;
      best = v;
    }
  });
  if (best_deg == 0) return 2;  // single isolated vertex
  BitSet without = alive;
  without.reset(best);
  BitSet closed = without - g.row(static_cast<int>(best));
  return count_alive(g, without) + count_alive(g, closed);
}

}  // namespace

BigInt exact_count_general(const SimpleGraph& g, const BitSet& alive, int cap) {
  if (static_cast<int>(alive.count()) > cap)
    throw CapacityError("general branching counter limited to " + std::to_string(cap) + " vertices");
  return count_alive(g, alive);
}

ExactCount exact_count_general(const SimpleGraph& g, int cap) {
  const auto t0 = std::chrono::steady_clock::now();
  BigInt v = exact_count_general(g, BitSet::full(static_cast<std::size_t>(g.size())), cap);
  return ExactCount{v, {}, elapsed_since(t0)};
}

std::vector<DistributionEntry> exact_distribution(const BipartiteGraph& g, const Rational& lambda,
                                                  std::size_t max_entries) {
  if (lambda <= 0) throw InvalidArgument("lambda must be positive");
  const BigInt count = exact_count_bipartite(g).value;
  if (count > max_entries)
    throw CapacityError("distribution table would hold " + count.str() + " entries (cap " + std::to_string(max_entries) + ")");
  const int nX = g.nX();
  std::vector<DistributionEntry> table;
  table.reserve(static_cast<std::size_t>(count));
  std::vector<Rational> lam_pow(static_cast<std::size_t>(nX + g.nY() + 1));
  lam_pow[0] = 1;
  for (std::size_t i = 1; i < lam_pow.size(); ++i) lam_pow[i] = lam_pow[i - 1] * lambda;
  Rational z = 0;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << nX); ++s) {
    BitSet xs(static_cast<std::size_t>(nX));
    for (int i = 0; i < nX; ++i)
      if ((s >> i) & 1U) xs.set(static_cast<std::size_t>(i));
    const SideSet free_y = SideSet(Side::Y, neighborhood(g, SideSet(Side::X, xs)).bits.complement());
    const std::vector<int> free = free_y.members();
    for (std::uint64_t t = 0; t < (std::uint64_t{1} << free.size()); ++t) {
      BitSet ys(static_cast<std::size_t>(g.nY()));
      for (std::size_t j = 0; j < free.size(); ++j)
        if ((t >> j) & 1U) ys.set(static_cast<std::size_t>(free[j]));
      BipartiteSet set{xs, ys};
      const Rational w = lam_pow[set.size()];
      z += w;
      table.push_back({std::move(set), w});
    }
  }
  for (auto& e : table) e.probability /= z;
  std::sort(table.begin(), table.end(), [](const auto& a, const auto& b) { return a.set < b.set; });
  return table;
}

ExactSampler::ExactSampler(std::vector<DistributionEntry> table) : table_(std::move(table)) {
  if (table_.empty()) throw InvalidArgument("empty distribution table");
  cumulative_.reserve(table_.size());
  double acc = 0;
  for (const auto& e : table_) cumulative_.push_back(acc += to_double(e.probability));
}

const BipartiteSet& ExactSampler::sample(std::mt19937_64& rng) const {
  const double u = uniform01(rng) * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return table_[static_cast<std::size_t>(it - cumulative_.begin())].set;
}

}  // namespace bisc
