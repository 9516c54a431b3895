#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "bisc/containers.hpp"
#include "bisc/expander.hpp"

namespace bisc {

/// Closed, 2-linked, non-expanding sets A_1..A_l on one side with pairwise
/// disjoint neighborhoods, listed by smallest vertex.
struct NonExpandingFamily {
  std::vector<SideSet> sets;
  std::vector<int> anchors;  // smallest vertex of each set
  std::vector<int> sizes;

  std::size_t count() const noexcept { return sets.size(); }
};

/// Throws InvalidArgument unless A is nonempty, closed, 2-linked and non-expanding.
void check_nonexpanding_closed(const BipartiteGraph& g, const SideSet& a, const ExpansionParams& p);

/// Every closed, 2-linked, non-expanding set on `side`, from the container
/// enumeration with each set reported once (at its smallest vertex), ordered by smallest vertex.
std::vector<SideSet> closed_nonexpanding_sets(const BipartiteGraph& g, Side side, const ExpansionParams& p,
                                              CandidateMethod method = CandidateMethod::connected,
                                              NonExpandingStats* stats = nullptr);

struct FamilyCensus {
  std::size_t closed_sets = 0;
  std::size_t families = 0;
  std::vector<std::size_t> by_count;  // families with l sets, index l
  std::size_t size_vectors = 0;       // distinct (a_1..a_l) realised, order ignored
  NonExpandingStats enumerator;
};

struct FamilyOptions {
  Side side = Side::X;
  std::size_t max_families = 2'000'000;
  CandidateMethod method = CandidateMethod::connected;
};

/// Every family, the empty one first. Sets in a family are pairwise disjoint and
/// each has |N(A)| >= d, so l <= n/d holds automatically.
std::vector<NonExpandingFamily> enumerate_families(const BipartiteGraph& g, const ExpansionParams& p,
                                                   const FamilyOptions& opts = {}, FamilyCensus* census = nullptr);

/// D(A) = #{B subset of A : B 2-linked, N(B) = N(A)}, by subset enumeration.
BigInt count_D(const BipartiteGraph& g, const SideSet& a, int cap = 30);

struct DEstimate {
  double value = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  std::uint64_t samples_used = 0;
  std::uint64_t hits = 0;
  double p_lower = 0.0;  // 2^{-|A''|}
  int a_double_prime = 0;
};

/// ceil(3 eps^-2 ln(2/delta) 2^{a''}).
std::uint64_t d_sample_count(double eps, double delta, int a_double_prime);

/// Hit fraction of uniform nonempty B subset of A, times 2^{|A|} - 1.
DEstimate estimate_D(const BipartiteGraph& g, const SideSet& a, const ExpansionParams& p, double eps, double delta,
                     std::uint64_t seed, std::uint64_t max_samples = 4'000'000'000ULL);

/// ceil(d / (2 log^2 d) log(2n/eps)), at least 1.
int general_ell(int n, int d, double eps);

struct GeneralOptions {
  bool exact = false;         // exhaustive D and exact restricted Xi
  bool verify_kp = false;
  bool check_restriction = true;  // compare subgraph polymers with the restricted universe per family
  FamilyOptions families;
  ClusterOptions clusters;
  std::size_t max_polymers = 20000;
  int exact_subset_cap = 24;
  std::uint64_t max_samples = 4'000'000'000ULL;
};

struct GeneralCount {
  ApproxCount count;
  FamilyCensus census;
  int L = 0;
  bool large_degree = false;  // d > sqrt(n): restricted Xi replaced by 1
  double eps_d = 0.0;         // per-estimate relative accuracy
  double delta_d = 0.0;       // per-estimate failure probability
  std::size_t distinct_sets = 0;
  std::uint64_t d_samples = 0;
  std::size_t restriction_checks = 0;
};

/// Sum over families of prod D(A_i) 2^{|Y_A|} Xi^{X_A}(L) with
/// X_A = X \ N(N(U)), Y_A = Y \ N(U), U the union of the family.
GeneralCount count_general(const BipartiteGraph& g, double eps, double delta, std::uint64_t seed,
                           const ExpansionParams& p, const GeneralOptions& opts = {});

}  // namespace bisc
