#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "bisc/graph.hpp"
#include "bisc/numeric.hpp"

namespace bisc {

enum class Membership : std::uint8_t { expanding, small };

/// Which 2-linked sets on one side count as polymers.
struct PolymerFamily {
  Membership membership = Membership::expanding;
  Side side = Side::X;
  ExpansionParams params;  // used by the expanding family only

  static PolymerFamily expanding(Side s, ExpansionParams p = {}) { return {Membership::expanding, s, p}; }
  static PolymerFamily small(Side s) { return {Membership::small, s, {}}; }

  /// Membership predicate for a 2-linked set (2-linkedness is not rechecked).
  bool admits(const BipartiteGraph& g, const SideSet& a) const;
  /// Same predicate from sizes: |N(A)|, |[A]|.
  bool admits_sizes(const BipartiteGraph& g, int boundary, int closure_size) const;
  /// True when the predicate rejects every nonempty set, e.g. expanding with
  /// (C1/2) log^2 d / d >= 1.
  bool trivially_empty(const BipartiteGraph& g) const;
};

struct Polymer {
  SideSet vertices;
  SideSet boundary;  // N(vertices)

  int size() const noexcept { return static_cast<int>(vertices.size()); }
  int boundary_size() const noexcept { return static_cast<int>(boundary.size()); }
};

Polymer make_polymer(const BipartiteGraph& g, SideSet vertices);

/// True iff the union is not 2-linked, i.e. N(a) and N(b) are disjoint.
/// A polymer is incompatible with itself. Throws on a side mismatch.
bool are_compatible(const Polymer& a, const Polymer& b);

enum class WeightKind : std::uint8_t { unweighted, hardcore, tilde_unweighted, tilde_hardcore };

/// Polymer weights:
///   unweighted        2^{-|N|}
///   hardcore          lambda^{|g|} (1+lambda)^{-|N|}
///   tilde_unweighted  2^{-|N|} 2^{|g| log^2 d / d}
///   tilde_hardcore    lambda^{|g|} (1+lambda)^{-|N|} 2^{c |g|}, c supplied by the caller
struct WeightModel {
  WeightKind kind = WeightKind::unweighted;
  std::optional<Rational> lambda;  // exact fugacity when known
  double lambda_value = 1.0;
  std::optional<Rational> tilde_exact;  // c for tilde_hardcore, when rational
  double tilde = 0.0;

  static WeightModel unweighted() { return {}; }
  static WeightModel hardcore(const Rational& lambda);
  static WeightModel hardcore_float(double lambda);
  static WeightModel tilde_unweighted() { return {WeightKind::tilde_unweighted, std::nullopt, 1.0, std::nullopt, 0.0}; }
  static WeightModel tilde_hardcore(const Rational& lambda, double c, std::optional<Rational> c_exact = std::nullopt);

  /// Fill probability lambda/(1+lambda) for the unoccupied side.
  double fill_probability() const { return lambda_value / (1.0 + lambda_value); }
  std::optional<Rational> exact_fill_probability() const;

  double log_weight(int size, int boundary, int d) const;
  double log_weight(const Polymer& p, int d) const { return log_weight(p.size(), p.boundary_size(), d); }
  /// Exact value when every factor is rational.
  std::optional<Rational> exact_weight(int size, int boundary, int d) const;
  std::optional<Rational> exact_weight(const Polymer& p, int d) const {
    return exact_weight(p.size(), p.boundary_size(), d);
  }
};

/// Polymers of one family up to a size cap, with the incompatibility graph.
struct PolymerUniverse {
  PolymerFamily family;
  int size_cap = 0;
  std::vector<Polymer> polymers;      // canonical order: by size, then colex
  std::vector<BitSet> incompatible;   // incompatible[i] over polymer ids, i itself excluded

  std::size_t count() const noexcept { return polymers.size(); }
  int total_size() const;
  /// Polymers lying inside `allowed` (a set on the family's side), with the
  /// induced incompatibility graph.
  PolymerUniverse restricted(const BitSet& allowed) const;
};

/// Every polymer of `fam` with at most size_cap vertices, by connected-set
/// enumeration in G^2 rooted at each polymer's smallest vertex. When `allowed`
/// is given only polymers inside it are listed. Throws CapacityError beyond
/// max_polymers.
PolymerUniverse enumerate_polymers(const BipartiteGraph& g, const PolymerFamily& fam, int size_cap,
                                   const BitSet* allowed = nullptr, std::size_t max_polymers = 20000);

/// Universe from an explicit polymer list (sorted canonically, duplicates removed).
PolymerUniverse make_universe(const BipartiteGraph& g, const PolymerFamily& fam, std::vector<SideSet> sets,
                              int size_cap);

/// Polymers of the induced subgraph H = G[allowed u allowed_other] computed from
/// H's own adjacency (2-linkedness through allowed_other, closure inside allowed).
/// Vertex degrees still count as d.
std::vector<SideSet> enumerate_subgraph_polymers(const BipartiteGraph& g, const PolymerFamily& fam,
                                                 const BitSet& allowed, const BitSet& allowed_other, int size_cap,
                                                 std::size_t max_polymers = 20000);

/// Raw Ursell function: sum over spanning connected edge subsets E' of (-1)^{|E'|}.
/// H is given by neighbor masks on k <= cap vertices.
std::int64_t ursell(const std::vector<std::uint32_t>& adjacency, int cap = 10);

/// Ursell function of the incompatibility graph of a multiset of polymers:
/// `types_incompatible[i]` has bit j set when types i != j are incompatible,
/// copies of one type are always incompatible.
std::int64_t ursell_multiset(const std::vector<std::uint32_t>& types_incompatible,
                             const std::vector<int>& multiplicities, int cap = 24);

/// One cluster, summed over all its orderings:
/// term = phi(H) prod w^{m} / prod m!.
struct ClusterTerm {
  std::vector<int> ids;             // distinct polymer ids, ascending
  std::vector<int> multiplicities;  // parallel to ids
  int size = 0;                     // sum of m |gamma|
  std::int64_t phi = 0;
  double term = 0.0;
  std::optional<Rational> exact_term;
  BitSet support;                   // union of the polymers' vertices
};

struct ClusterOptions {
  bool exact = false;  // also compute exact_term (needs exact weights)
  std::uint64_t max_clusters = 50'000'000;
  int max_multiplicity_total = 24;
};

/// Streams every cluster with size <= ell. The visitor returns false to stop.
/// Supports are grown from their lowest-index polymer, so each multiset is
/// produced once.
void for_each_cluster(const BipartiteGraph& g, const PolymerUniverse& u, const WeightModel& m, int ell,
                      const ClusterOptions& opts, const std::function<bool(const ClusterTerm&)>& visit);

std::vector<ClusterTerm> enumerate_clusters(const BipartiteGraph& g, const PolymerUniverse& u, const WeightModel& m,
                                            int ell, const ClusterOptions& opts = {});

}  // namespace bisc
