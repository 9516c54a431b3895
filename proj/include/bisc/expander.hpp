#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bisc/cluster_expansion.hpp"
#include "bisc/oracle.hpp"

namespace bisc {

/// A count estimate in natural-log space.
struct ApproxCount {
  double log_value = 0.0;
  /// Relative error the run can vouch for. Exact branches report the requested
  /// epsilon; expansion branches report the combined bound, which may reach 1
  /// at desk scale (then certified is false).
  double rel_error_bound = 0.0;
  bool certified = false;
  std::string method;  // brute, expander-CE, general, oracle
  double log_xi_x = 0.0;
  double log_xi_y = 0.0;
  int ell = 0;
  KPStatus kp_status = KPStatus::assumed;
  double eps0 = 0.0;
  std::optional<BigInt> exact;
  std::optional<Rational> exact_weighted;
  std::vector<std::string> notes;
};

/// 2^{-n log^2 d / (60 d)}.
double expander_eps0(int n, int d);

struct ExpanderOptions {
  bool allow_brute = true;  // exact count when eps <= 2 eps0
  bool verify_kp = false;
  int brute_cap = 30;
  std::size_t max_polymers = 20000;
  ClusterOptions clusters;
};

/// 2^n (Xi^X(l) + Xi^Y(l)) over expanding polymers, l = choose_ell(n, d, eps/4),
/// or the exact count when eps <= 2 eps0.
ApproxCount count_expander(const BipartiteGraph& g, double eps, const ExpansionParams& p,
                           const ExpanderOptions& opts = {});

struct HardCoreParams {
  Rational lambda = 1;
  Rational alpha = 1;
  double c4 = 1.0;
  double c5 = 1.0;
  std::optional<double> C2;  // derived from the alpha-beta condition when unset

  void validate() const;
  /// log^2(1+l) / (log(1+l) + log(2 d^5 / alpha)).
  double beta(int d) const;
  /// Exact beta when both logarithms are integers.
  std::optional<Rational> beta_exact(int d) const;
  /// beta >= c4 max{log(d^5/alpha)/sqrt d, 2 log^2 d/(alpha d)}.
  bool container_condition(int d) const;
  /// alpha beta >= (4000/c5) log^2 d / d.
  bool alpha_beta_condition(int d) const;
  /// Configured C2, or the least C with C log d / d^{1/4} meeting the alpha-beta condition.
  double C2_value(int d) const;
  /// lambda >= C2 log d / d^{1/4}.
  bool lambda_condition(int d) const;
};

/// (1+l)^n (Xi^X(l, lambda) + Xi^Y(l, lambda)) over small polymers with the
/// weighted choice of l. Never certified when a condition flag fails.
ApproxCount count_hardcore_expander(const BipartiteGraph& g, const HardCoreParams& hp, double eps,
                                    const ExpanderOptions& opts = {});

enum class SamplerMode : std::uint8_t { automatic, exact, self_reducible };
const char* sampler_mode_name(SamplerMode m);

struct SamplerOptions {
  SamplerMode mode = SamplerMode::automatic;
  std::size_t exact_cap = 24;  // polymers per side for exact mode
  std::size_t max_polymers = 20000;
  ClusterOptions clusters;
};

/// A polymer configuration with its probability under the sampler.
struct ConfigurationProbability {
  std::vector<SideSet> polymers;
  double probability = 0.0;
};

/// Draws from the two-side mixture: a side with probability proportional to its
/// partition function, a compatible configuration Lambda on that side, then each
/// vertex of the other side outside N(Lambda) independently with the fill
/// probability.
///
/// Exact mode enumerates every configuration. Self-reducible mode resolves the
/// side's vertices in index order: with R the vertices still open, v is left
/// out with odds Xi(R - v) and covered by a polymer g in R with odds
/// w_g Xi(R - N(N(g))), each Xi being the truncated cluster expansion.
class ExpanderSampler {
 public:
  ExpanderSampler(const BipartiteGraph& g, Membership membership, const ExpansionParams& p, const WeightModel& m,
                  double eps, const SamplerOptions& opts = {});

  BipartiteSet sample(std::mt19937_64& rng) const;
  SamplerMode mode() const noexcept { return mode_; }
  int ell() const noexcept { return ell_; }
  double side_probability(Side s) const { return s == Side::X ? px_ : 1.0 - px_; }
  double log_xi(Side s) const { return side(s).log_xi; }
  const PolymerUniverse& universe(Side s) const { return side(s).universe; }

  /// Configuration law of one side as implemented (exact mode: w/Xi; self-reducible
  /// mode: product of the step probabilities along each decision path).
  std::vector<ConfigurationProbability> configuration_distribution(Side s) const;

  /// The full output distribution over independent sets, exact mode with rational weights only.
  std::vector<DistributionEntry> output_distribution(std::size_t max_entries = 1u << 20) const;

 private:
  struct SideModel {
    PolymerUniverse universe;
    double log_xi = 0.0;
    std::optional<Rational> exact_xi;
    std::vector<double> config_cumulative;     // exact mode
    std::vector<std::vector<int>> configs;     // exact mode
    std::optional<ClusterTable> table;         // self-reducible mode
    std::vector<std::vector<int>> containing;  // polymer ids by smallest vertex
  };

  const SideModel& side(Side s) const { return s == Side::X ? x_ : y_; }
  void build_exact(SideModel& sm) const;
  void build_self_reducible(SideModel& sm) const;
  std::vector<int> sample_configuration(const SideModel& sm, std::mt19937_64& rng) const;
  /// Options at the next open vertex: first entry is "leave v out" (id -1).
  std::vector<std::pair<int, double>> step_weights(const SideModel& sm, const BitSet& open, int v) const;

  const BipartiteGraph& g_;
  WeightModel m_;
  SamplerMode mode_;
  int ell_ = 0;
  double px_ = 0.5;
  std::optional<Rational> exact_px_;
  SideModel x_, y_;
};

/// One draw of the unweighted sampler over expanding polymers.
BipartiteSet sample_expander(const BipartiteGraph& g, double eps, const ExpansionParams& p, std::uint64_t seed,
                             const SamplerOptions& opts = {});

/// One draw of the hard-core sampler over small polymers.
BipartiteSet sample_hardcore_expander(const BipartiteGraph& g, const HardCoreParams& hp, double eps,
                                      std::uint64_t seed, const SamplerOptions& opts = {});

/// Total variation distance between two distributions given as entry lists.
double total_variation(const std::vector<DistributionEntry>& a, const std::vector<DistributionEntry>& b);
Rational total_variation_exact(const std::vector<DistributionEntry>& a, const std::vector<DistributionEntry>& b);

}  // namespace bisc
