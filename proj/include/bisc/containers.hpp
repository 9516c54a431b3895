#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <unordered_map>
#include <vector>

#include "bisc/graph.hpp"
#include "bisc/numeric.hpp"
#include "bisc/simple_graph.hpp"

namespace bisc {

// ---------------------------------------------------------------------------
// Set cover

/// Bipartite incidence between P = {0..p_count-1} and Q = {0..q_count-1}.
struct CoverInstance {
  int p_count = 0;
  int q_count = 0;
  std::vector<std::vector<int>> q_to_p;
};

/// Greedy maximum coverage: returns Q' (ascending) with P inside N(Q').
/// `a` and `b` are the promised min P-degree and max Q-degree; they are checked.
std::vector<int> greedy_cover(const CoverInstance& h, int a, int b);

/// (|Q|/a)(1 + ln b).
double cover_bound(int q_count, int a, int b);

// ---------------------------------------------------------------------------
// Essential subsets and small generators

/// W_s = {u in N(A) : |N(u) & [A]| >= s}.
SideSet heavy_boundary(const BipartiteGraph& g, const SideSet& a, double s);

/// F inside N(A), F contains W_{d/2}, N(F) contains [A].
bool is_essential_subset(const BipartiteGraph& g, const SideSet& f, const SideSet& a);

struct SmallGenerator {
  SideSet a_prime;         // 2-linked, contains the anchor, N(A') essential for A
  SideSet a_double_prime;  // 2-linked, contains A', N(A'') = N(A)
  int anchor = 0;
};

/// Constructive generators for a 2-linked A, anchored at its smallest vertex
/// unless `anchor` names another member.
SmallGenerator small_generator(const BipartiteGraph& g, const SideSet& a, const ExpansionParams& p, int anchor = -1);

/// 2(a/d) ln d + 2w/d and that plus 2(w - a).
double small_generator_bound_prime(int a, int w, int d);
double small_generator_bound_double_prime(int a, int w, int d);

enum class CandidateMethod { connected, walk };

/// ceil(4 (w/d) ln d), at least 1: the size cap on B.
int candidate_size_cap(int w, int d);
/// ceil(8 (w/d) ln d): walk length of the step-list procedure.
int candidate_walk_length(int w, int d);

/// {N(B) : B 2-linked, v in B, |B| <= candidate_size_cap(w, d)}, deduplicated and
/// sorted canonically. `side` is the side of v; the sets live on the other side.
std::vector<SideSet> enumerate_essential_candidates(const BipartiteGraph& g, Side side, int v, int w,
                                                    CandidateMethod method = CandidateMethod::connected,
                                                    std::uint64_t walk_budget = 50'000'000);

// ---------------------------------------------------------------------------
// Closed non-expanding sets

/// [a, a(1 + C1 log^2 d / d)] clipped to the opposite side size; the whole
/// range [a, n] when C1 log^2 d / d > 1 (the short interval is only valid below that).
std::pair<int, int> boundary_size_range(int a, int n_other, int d, double C1);

/// Largest |W \ F| listed for boundary size w: floor(C1 w log^2 d / d).
int extension_budget(int w, int d, double C1);

struct NonExpandingStats {
  std::uint64_t candidate_sets = 0;  // distinct F over all w
  std::uint64_t boundaries_listed = 0;  // W = F u S generated
  std::uint64_t distinct_boundaries = 0;
};

/// Lists the closed, 2-linked, non-expanding sets A containing v with |A| = a,
/// by the essential-subset procedure: for each boundary size w in range and each
/// candidate F, every W = F u S with S inside N^2(F) \ F and |S| <= budget, then
/// A = {u : N(u) inside W}, keeping those that pass every membership check.
/// Work is cached per anchor vertex, so query all a for one v together.
class NonExpandingEnumerator {
 public:
  NonExpandingEnumerator(const BipartiteGraph& g, Side side, ExpansionParams p,
                         CandidateMethod method = CandidateMethod::connected);

  /// Sorted canonically.
  std::vector<SideSet> enumerate(int v, int a);
  const NonExpandingStats& stats() const noexcept { return stats_; }
  Side side() const noexcept { return side_; }

 private:
  struct Anchor {
    std::vector<std::vector<SideSet>> by_size;  // index a
  };
  const Anchor& anchor(int v);

  const BipartiteGraph& g_;
  Side side_;
  ExpansionParams p_;
  CandidateMethod method_;
  std::unordered_map<int, Anchor> anchors_;
  NonExpandingStats stats_;
};

std::vector<SideSet> enumerate_nonexpanding_closed(const BipartiteGraph& g, Side side, int v, int a,
                                                   const ExpansionParams& p);

// ---------------------------------------------------------------------------
// Certificates

struct Certificate {
  std::vector<std::uint8_t> xi;  // one entry per vertex; steps beyond the run are 0
  int T = 0;
  int steps = 0;                 // k: number of loop iterations
  std::vector<int> ordering;     // ordering[r] = vertex with rank r (earlier wins ties)
};

/// Identity order 0..n-1.
std::vector<int> identity_ordering(int n);

/// Runs the selection loop on independent set I until T vertices of I were taken.
Certificate compute_certificate(const SimpleGraph& g, const BitSet& independent, int T,
                                const std::vector<int>& ordering = {});

struct CertificateRegion {
  BitSet region;  // V_xi
  BitSet forced;  // I outside V_xi
};

/// Replays the loop from xi alone. Throws MalformedCertificate when xi cannot be replayed.
CertificateRegion certificate_region(const SimpleGraph& g, const Certificate& c);

/// Number of independent sets with fewer than T vertices.
BigInt count_small_independent_sets(const SimpleGraph& g, int T);

using ExactCounter = std::function<BigInt(const SimpleGraph&, const BitSet&)>;

struct CertificateCount {
  BigInt at_least_T;  // sum over certificates of i(G[V_xi])
  BigInt below_T;     // brute force
  BigInt total() const { return at_least_T + below_T; }
  std::uint64_t certificates = 0;
  std::size_t max_region = 0;
  std::vector<std::uint64_t> region_histogram;  // index |V_xi|
};

/// Enumerates every certificate with T ones by branching the loop on each
/// selected vertex, and sums the supplied exact counter over the regions.
CertificateCount count_via_certificates(const SimpleGraph& g, int T, const ExactCounter& counter = {},
                                        const std::vector<int>& ordering = {},
                                        std::uint64_t max_certificates = 5'000'000);

/// n/2 + 4 n ln d / d.
double region_bound(int n_total, int d);

}  // namespace bisc
