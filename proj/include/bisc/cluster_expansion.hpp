#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bisc/polymer.hpp"

namespace bisc {

/// ceil(d/(2 log^2 d) log(n/eps)), or with 1000 in place of 2 for the weighted
/// model; at least 1. Requires d >= 2.
int choose_ell(int n, int d, double eps, bool weighted = false);

/// n 2^{-2 l log^2 d / d}, or n 2^{-500 l log^2 d / d} for the weighted model.
double certified_bound(int n, int d, int ell, bool weighted = false);

enum class KPStatus : std::uint8_t { verified_to_cap, assumed, violated };
const char* kp_status_name(KPStatus s);

/// f and g in the summability condition, linear in |gamma| and |N(gamma)|.
struct KPFunctions {
  double f_per_vertex = 0.0;
  double g_per_boundary = 0.0;

  /// f = ln2 |g| log^2 d / d, g = 2 ln2 |N| log^2 d / d.
  static KPFunctions unweighted(int d);
  /// f = c5 alpha ln2 beta |g| / divisor, g = c5 alpha ln2 beta |N| / 8, with
  /// divisor 8 for the plain weights and 16 for the tilde weights.
  static KPFunctions weighted(double c5, double alpha, double beta, bool tilde = false);

  double f(const Polymer& p) const { return f_per_vertex * p.size(); }
  double g(const Polymer& p) const { return g_per_boundary * p.boundary_size(); }
};

struct KPEntry {
  int polymer = 0;
  double lhs = 0.0;  // sum over incompatible gamma' (gamma included) of w e^{f+g}
  double f = 0.0;
  bool pass = false;
};

struct KPReport {
  std::vector<KPEntry> entries;
  bool all_pass = true;
  bool partial = true;  // sums only run over polymers up to size_cap
  int size_cap = 0;
};

KPReport verify_kp(const BipartiteGraph& g, const PolymerUniverse& u, const WeightModel& m, const KPFunctions& kp);

struct LogPartitionEstimate {
  double log_value = 0.0;          // ln Xi(ell)
  int ell_used = 0;
  double certified_bound = 0.0;
  KPStatus kp_status = KPStatus::assumed;
  std::optional<Rational> exact_sum;  // the same sum in rational arithmetic
  std::uint64_t clusters = 0;
  std::size_t polymers = 0;
  std::vector<double> by_size;      // partial sums per cluster size, index = size
};

struct TruncationOptions {
  bool exact = false;
  bool weighted_bound = false;
  std::optional<KPFunctions> kp;  // run verify_kp on the universe and record the outcome
  ClusterOptions clusters;
  std::size_t max_polymers = 20000;
};

/// Sum of all cluster terms with size <= ell, accumulated per size with
/// compensated summation and added in ascending size.
LogPartitionEstimate truncated_log_xi(const BipartiteGraph& g, const PolymerUniverse& u, const WeightModel& m, int ell,
                                      const TruncationOptions& opts = {});
/// Same, enumerating the polymers of size <= ell first.
LogPartitionEstimate truncated_log_xi(const BipartiteGraph& g, const PolymerFamily& fam, const WeightModel& m, int ell,
                                      const TruncationOptions& opts = {});

/// Cluster terms stored with their vertex supports, so that ln Xi(ell) of any
/// restricted universe (polymers inside a vertex set) is a filtered sum.
class ClusterTable {
 public:
  ClusterTable(const BipartiteGraph& g, const PolymerUniverse& u, const WeightModel& m, int ell,
               const ClusterOptions& opts = {});
  /// Sum of the terms whose support lies inside `allowed`.
  double log_xi_within(const BitSet& allowed) const;
  double log_xi() const;
  std::size_t size() const noexcept { return terms_.size(); }
  int ell() const noexcept { return ell_; }

 private:
  int ell_;
  std::vector<BitSet> supports_;
  std::vector<double> terms_;  // ascending cluster size
};

/// Visits every set of pairwise compatible polymers (the empty set first).
void for_each_configuration(const PolymerUniverse& u, const std::function<void(const std::vector<int>&)>& visit);

struct ExactXi {
  double log_value = 0.0;
  std::optional<Rational> value;
  /// Coefficient of total polymer size k: sum of prod w over configurations with
  /// ||Lambda|| = k. Exact entries are filled when weights are rational.
  std::vector<double> by_size;
  std::vector<Rational> exact_by_size;
  std::size_t configurations = 0;
};

/// Xi = sum over compatible configurations of prod w, by enumeration.
ExactXi exact_xi(const BipartiteGraph& g, const PolymerUniverse& u, const WeightModel& m, std::size_t cap = 24);
/// Same over the full family (polymers of every size).
ExactXi exact_xi(const BipartiteGraph& g, const PolymerFamily& fam, const WeightModel& m, std::size_t cap = 24);

/// Xi over the family's polymers inside `allowed` (whole side when null), summing
/// prod w over vertex subsets whose 2-linked components are all members.
/// Limited to 2^cap subsets.
ExactXi exact_xi_subsets(const BipartiteGraph& g, const PolymerFamily& fam, const WeightModel& m,
                         const BitSet* allowed = nullptr, int cap = 24);

struct TailMass {
  double probability = 0.0;         // P(||Lambda|| >= delta n) under nu
  std::optional<Rational> exact;
  double bound = 0.0;               // 2^{-delta n log^2 d / (2d)}
};

TailMass tail_mass(const BipartiteGraph& g, const PolymerFamily& fam, const WeightModel& m, double delta,
                   std::size_t cap = 24);

}  // namespace bisc
