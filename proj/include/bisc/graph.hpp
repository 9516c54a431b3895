#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bisc/bitset.hpp"

namespace bisc {

enum class Side : std::uint8_t { X, Y };

constexpr Side opposite(Side s) noexcept { return s == Side::X ? Side::Y : Side::X; }
constexpr const char* side_name(Side s) noexcept { return s == Side::X ? "X" : "Y"; }

/// A subset of one side of the bipartition.
struct SideSet {
  Side side = Side::X;
  BitSet bits;

  SideSet() = default;
  SideSet(Side s, std::size_t side_size) : side(s), bits(side_size) {}
  SideSet(Side s, BitSet b) : side(s), bits(std::move(b)) {}
  SideSet(Side s, std::size_t side_size, std::initializer_list<std::size_t> members)
      : side(s), bits(side_size, members) {}

  std::size_t size() const noexcept { return bits.count(); }
  bool empty() const noexcept { return bits.none(); }
  bool contains(std::size_t v) const noexcept { return bits.test(v); }
  std::vector<int> members() const { return bits.members(); }

  friend bool operator==(const SideSet& a, const SideSet& b) noexcept {
    return a.side == b.side && a.bits == b.bits;
  }
  friend bool operator<(const SideSet& a, const SideSet& b) noexcept {
    if (a.side != b.side) return a.side < b.side;
    return a.bits < b.bits;
  }
};

struct SideSetHash {
  std::size_t operator()(const SideSet& s) const noexcept {
    return s.bits.hash() ^ (static_cast<std::size_t>(s.side) * 0x51ed270b27ULL);
  }
};

/// A vertex set of the whole graph, stored per side.
struct BipartiteSet {
  BitSet x;
  BitSet y;

  std::size_t size() const noexcept { return x.count() + y.count(); }
  friend bool operator==(const BipartiteSet& a, const BipartiteSet& b) noexcept { return a.x == b.x && a.y == b.y; }
  friend bool operator<(const BipartiteSet& a, const BipartiteSet& b) noexcept {
    if (!(a.x == b.x)) return a.x < b.x;
    return a.y < b.y;
  }
};

/// Simple d-regular bipartite graph with sides X = {0..nX-1}, Y = {0..nY-1}.
/// Immutable after construction.
class BipartiteGraph {
 public:
  using Edge = std::pair<int, int>;  // (x index, y index)

  /// Validates simplicity and d-regularity; throws InvalidArgument otherwise.
  BipartiteGraph(int nX, int nY, int d, const std::vector<Edge>& edges);

  int n(Side s) const noexcept { return s == Side::X ? nX_ : nY_; }
  int nX() const noexcept { return nX_; }
  int nY() const noexcept { return nY_; }
  int degree() const noexcept { return d_; }
  /// Side size when both sides agree; throws otherwise.
  int balanced_n() const;
  bool balanced() const noexcept { return nX_ == nY_; }

  std::span<const int> neighbors(Side s, int v) const noexcept {
    const auto& lists = s == Side::X ? adjX_ : adjY_;
    return lists[static_cast<std::size_t>(v)];
  }
  /// Neighborhood of v as a bitset over the opposite side.
  const BitSet& row(Side s, int v) const noexcept {
    return (s == Side::X ? rowX_ : rowY_)[static_cast<std::size_t>(v)];
  }
  /// Same-side vertices sharing at least one neighbor with v (v excluded), ascending.
  std::span<const int> square_neighbors(Side s, int v) const noexcept {
    return (s == Side::X ? sqX_ : sqY_)[static_cast<std::size_t>(v)];
  }
  const BitSet& square_row(Side s, int v) const noexcept {
    return (s == Side::X ? sqRowX_ : sqRowY_)[static_cast<std::size_t>(v)];
  }

  std::vector<Edge> edges() const;

  SideSet empty_set(Side s) const { return SideSet(s, static_cast<std::size_t>(n(s))); }
  SideSet full_set(Side s) const { return SideSet(s, BitSet::full(static_cast<std::size_t>(n(s)))); }
  SideSet make_set(Side s, std::initializer_list<std::size_t> members) const {
    return SideSet(s, static_cast<std::size_t>(n(s)), members);
  }
  SideSet make_set(Side s, const std::vector<int>& members) const;

 private:
  int nX_, nY_, d_;
  std::vector<std::vector<int>> adjX_, adjY_;
  std::vector<BitSet> rowX_, rowY_;
  std::vector<std::vector<int>> sqX_, sqY_;
  std::vector<BitSet> sqRowX_, sqRowY_;
};

/// Constants of the expansion definitions.
struct ExpansionParams {
  double C1 = 100.0;
  double alpha = 1.0;

  void validate() const;
};

/// N(A), on the opposite side.
SideSet neighborhood(const BipartiteGraph& g, const SideSet& a);

/// [A] = {u : N(u) subset of N(A)}.
SideSet closure(const BipartiteGraph& g, const SideSet& a);

/// Components of A in G^2, ordered by smallest member.
std::vector<SideSet> two_linked_components(const BipartiteGraph& g, const SideSet& a);

/// No edge between s.x and s.y.
bool is_independent(const BipartiteGraph& g, const BipartiteSet& s);

/// Nonempty and connected in G^2.
bool is_two_linked(const BipartiteGraph& g, const SideSet& a);

/// |N(A)| - |[A]| >= (C1/2) (log2^2 d / d) |N(A)|. Throws on empty A.
bool is_expanding(const BipartiteGraph& g, const SideSet& a, const ExpansionParams& p);

/// The same test from precomputed sizes.
bool is_expanding_sizes(int boundary, int closure_size, int d, double C1);

enum class ExpanderCheckMode { exhaustive, heuristic };
enum class ExpanderVerdictKind { verified, falsified, unknown };

struct ExpanderVerdict {
  ExpanderVerdictKind kind;
  std::optional<SideSet> witness;
  std::uint64_t sets_checked = 0;
};

struct ExpanderCheckOptions {
  int exhaustive_cap = 20;
  int heuristic_samples = 20000;
  int heuristic_linked_cap = 4;
  std::uint64_t seed = 1;
};

/// Checks |N(A)| >= (1+alpha)|A| for one-sided A with |A| <= n/2.
ExpanderVerdict check_alpha_expander(const BipartiteGraph& g, double alpha, ExpanderCheckMode mode,
                                     const ExpanderCheckOptions& opts = {});

}  // namespace bisc
