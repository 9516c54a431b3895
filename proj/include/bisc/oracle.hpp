#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bisc/graph.hpp"
#include "bisc/numeric.hpp"
#include "bisc/simple_graph.hpp"

namespace bisc {

struct ExactCount {
  BigInt value;
  std::string fingerprint;
  double seconds = 0.0;
};

/// Stable hex digest of (nX, nY, d, edge list).
std::string fingerprint(const BipartiteGraph& g);

/// Joint histogram over S subset of the smaller side: hist[|S|][|N(S)|].
/// Gray-code sweep with per-vertex coverage counters; side size <= cap.
std::vector<std::vector<std::uint64_t>> subset_neighborhood_histogram(const BipartiteGraph& g, Side side, int cap = 30);

/// i(G) = sum over S subset of one side of 2^{|other side| - |N(S)|}.
ExactCount exact_count_bipartite(const BipartiteGraph& g, int cap = 30);

/// Z_G(lambda) = sum_S lambda^{|S|} (1+lambda)^{|other side| - |N(S)|}.
Rational exact_hardcore(const BipartiteGraph& g, const Rational& lambda, int cap = 30);

/// i(G[alive]) by branching i(G) = i(G - v) + i(G - N[v]) on a max-degree vertex,
/// splitting into components first.
BigInt exact_count_general(const SimpleGraph& g, const BitSet& alive, int cap = 40);
ExactCount exact_count_general(const SimpleGraph& g, int cap = 40);

struct DistributionEntry {
  BipartiteSet set;
  Rational probability;
};

/// Every independent set with its exact mu_{G,lambda} probability, in canonical order.
std::vector<DistributionEntry> exact_distribution(const BipartiteGraph& g, const Rational& lambda,
                                                  std::size_t max_entries = 1u << 20);

/// Draws from a table built by exact_distribution.
class ExactSampler {
 public:
  explicit ExactSampler(std::vector<DistributionEntry> table);
  const BipartiteSet& sample(std::mt19937_64& rng) const;
  const std::vector<DistributionEntry>& table() const noexcept { return table_; }

 private:
  std::vector<DistributionEntry> table_;
  std::vector<double> cumulative_;
};

}  // namespace bisc
