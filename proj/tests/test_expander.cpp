#include <doctest.h>

#include <bisc/errors.hpp>
#include <bisc/expander.hpp>
#include <bisc/instances.hpp>
#include <bisc/oracle.hpp>

#include <cmath>
#include <cstdio>
#include <map>
#include <random>

#include "support/brute.hpp"
#include "support/desk.hpp"
#include "support/formulas.hpp"

using namespace bisc;

namespace {

BipartiteGraph c8() { return generate(InstanceSpec::even_cycle(8)); }
BipartiteGraph k22() { return generate(InstanceSpec::complete_bipartite(2)); }

ExpansionParams with_C1(double c) {
  ExpansionParams p;
  p.C1 = c;
  return p;
}

using formulas::brute_side_census;
using formulas::decimal;
using formulas::family;
using formulas::formula_mu_hat;
using formulas::sum;

// nu(Lambda) = prod w / Xi, keyed by the union of the configuration.
std::map<std::uint64_t, double> brute_nu(const BipartiteGraph& g, const PolymerFamily& fam) {
  const auto a = brute::adjacency(g);
  const int n = g.n(fam.side);
  std::map<std::uint64_t, double> out;
  double total = 0.0;
  for (std::uint64_t set = 0; set < (std::uint64_t{1} << n); ++set) {
    if (!brute::all_members(a, fam.side, set, fam, g.degree())) continue;
    const double w = std::exp2(-std::popcount(brute::nbhd(a, fam.side, set)));
    out[set] = w;
    total += w;
  }
  for (auto& [set, w] : out) w /= total;
  return out;
}

std::map<std::uint64_t, double> by_union(const std::vector<ConfigurationProbability>& dist) {
  std::map<std::uint64_t, double> out;
  for (const auto& c : dist) {
    std::uint64_t m = 0;
    for (const auto& p : c.polymers) m |= brute::mask_of(p.bits);
    out[m] += c.probability;
  }
  return out;
}

double tv(const std::map<std::uint64_t, double>& a, const std::map<std::uint64_t, double>& b) {
  std::map<std::uint64_t, double> diff = a;
  for (const auto& [k, v] : b) diff[k] -= v;
  double s = 0.0;
  for (const auto& [k, v] : diff) s += std::fabs(v);
  return s / 2.0;
}

}  // namespace

TEST_CASE("brute branch") {
  CHECK(expander_eps0(4, 2) == doctest::Approx(std::exp2(-1.0 / 30)));
  const auto r = count_expander(k22(), 0.5, ExpansionParams{});
  CHECK(r.method == "brute");
  REQUIRE(r.exact);
  CHECK(*r.exact == 7);
  CHECK(r.log_value == doctest::Approx(std::log(7.0)));
  CHECK(r.certified);
  const auto q = count_expander(generate(InstanceSpec::hypercube(3)), 0.5, ExpansionParams{});
  CHECK(q.method == "brute");
  CHECK(*q.exact == 35);
  CHECK_THROWS_AS(count_expander(k22(), 0.0, ExpansionParams{}), InvalidArgument);
  CHECK_THROWS_AS(count_expander(k22(), -1.0, ExpansionParams{}), InvalidArgument);
}

TEST_CASE("expansion branch on C8") {
  const auto g = c8();
  ExpanderOptions opts;
  opts.allow_brute = false;
  opts.verify_kp = true;
  const auto r = count_expander(g, 0.5, with_C1(1.0), opts);
  CHECK(r.method == "expander-CE");
  CHECK(r.ell == 5);
  const auto sx = brute::log_series(brute::xi_poly(g, PolymerFamily::expanding(Side::X, with_C1(1.0)), 1), 5);
  const auto sy = brute::log_series(brute::xi_poly(g, PolymerFamily::expanding(Side::Y, with_C1(1.0)), 1), 5);
  Rational lx = 0, ly = 0;
  for (int k = 1; k <= 5; ++k) {
    lx += sx[static_cast<std::size_t>(k)];
    ly += sy[static_cast<std::size_t>(k)];
  }
  CHECK(r.log_xi_x == doctest::Approx(to_double(lx)));
  CHECK(r.log_xi_y == doctest::Approx(to_double(ly)));
  CHECK(r.log_value ==
        doctest::Approx(4 * std::log(2.0) + std::log(std::exp(to_double(lx)) + std::exp(to_double(ly)))));
  CHECK(r.eps0 > 0.25);
  CHECK_FALSE(r.certified);
  CHECK(r.kp_status == KPStatus::violated);
}

TEST_CASE("polymer identity 2^n Xi = |I_side|") {
  const auto g = c8();
  const auto fam = PolymerFamily::expanding(Side::X, with_C1(1.0));
  const auto xi = exact_xi(g, fam, WeightModel::unweighted());
  CHECK(Rational(16) * *xi.value == 42);
  CHECK(brute_side_census(g, fam, 1) == 42);

  int checked = 0;
  for (const auto& h : desk::instances()) {
    const int n = h.nX();
    for (double C1 : {0.5, 1.0, 2.0})
      for (Side s : {Side::X, Side::Y})
        for (Membership mem : {Membership::expanding, Membership::small}) {
          if (mem == Membership::small && C1 != 1.0) continue;
          const auto f = family(mem, s, C1);
          for (const Rational& lambda : {Rational(1), Rational(1, 2), Rational(3)}) {
            ExactXi e;
            try {
              e = exact_xi(h, f, WeightModel::hardcore(lambda));
            } catch (const CapacityError&) {
              continue;
            }
            CHECK(pow(1 + lambda, static_cast<unsigned>(n)) * *e.value == brute_side_census(h, f, lambda));
            ++checked;
          }
        }
  }
  CHECK(checked > 100);
}

TEST_CASE("inclusion-exclusion census") {
  const auto g = c8();
  const auto a = brute::adjacency(g);
  const auto fx = PolymerFamily::expanding(Side::X, with_C1(1.0));
  const auto fy = PolymerFamily::expanding(Side::Y, with_C1(1.0));
  int both = 0;
  brute::for_each_independent(a, [&](std::uint64_t xs, std::uint64_t ys) {
    both += brute::all_members(a, Side::X, xs, fx, 2) && brute::all_members(a, Side::Y, ys, fy, 2);
  });
  CHECK(both == 37);
  CHECK(Rational(16) * *exact_xi(g, fx, WeightModel::unweighted()).value +
            Rational(16) * *exact_xi(g, fy, WeightModel::unweighted()).value - both ==
        Rational(exact_count_bipartite(g).value));

  // Small sets cover every independent set from one side or the other.
  for (const auto& h : desk::instances()) {
    const auto b = brute::adjacency(h);
    const auto sx = PolymerFamily::small(Side::X);
    const auto sy = PolymerFamily::small(Side::Y);
    BigInt ix = 0, iy = 0, ixy = 0;
    brute::for_each_independent(b, [&](std::uint64_t xs, std::uint64_t ys) {
      const bool inx = brute::all_members(b, Side::X, xs, sx, h.degree());
      const bool iny = brute::all_members(b, Side::Y, ys, sy, h.degree());
      ix += inx;
      iy += iny;
      ixy += inx && iny;
    });
    CHECK(ix + iy - ixy == brute::count_independent(h));
  }
}

TEST_CASE("beta and condition flags") {
  HardCoreParams hp;
  hp.lambda = 1;
  hp.alpha = Rational(1, 2);
  REQUIRE(hp.beta_exact(16));
  CHECK(*hp.beta_exact(16) == Rational(1, 23));
  CHECK(hp.beta(16) == doctest::Approx(1.0 / 23));
  CHECK_FALSE(hp.alpha_beta_condition(16));
  CHECK_FALSE(hp.beta_exact(3));

  // With c5 = 1 the alpha-beta condition needs lambda beyond double range at desk degrees.
  CHECK(std::isinf(hp.C2_value(16)));
  CHECK_FALSE(hp.lambda_condition(16));

  // At the derived C2 the lambda threshold meets the alpha-beta condition.
  const int d = 64;
  HardCoreParams loose = hp;
  loose.c5 = 1e6;
  const double threshold = loose.C2_value(d) * std::log2(d) / std::pow(d, 0.25);
  REQUIRE(std::isfinite(threshold));
  HardCoreParams at = loose;
  at.lambda = decimal(threshold * 1.001);
  CHECK(at.lambda_condition(d));
  CHECK(at.alpha_beta_condition(d));
  HardCoreParams below = loose;
  below.lambda = decimal(threshold * 0.99);
  CHECK_FALSE(below.lambda_condition(d));
  CHECK_FALSE(below.alpha_beta_condition(d));
  HardCoreParams fixed = hp;
  fixed.C2 = 2.0;
  CHECK(fixed.C2_value(d) == 2.0);

  HardCoreParams bad;
  bad.lambda = 0;
  CHECK_THROWS_AS(count_hardcore_expander(k22(), bad, 0.1), InvalidArgument);
}

TEST_CASE("hard-core counts") {
  HardCoreParams hp;
  hp.lambda = Rational(1, 2);
  const auto r = count_hardcore_expander(k22(), hp, 0.1);
  // Both small families are empty on K_{2,2}: 2 (3/2)^2.
  CHECK(r.log_value == doctest::Approx(std::log(4.5)));
  CHECK(exact_hardcore(k22(), Rational(1, 2)) == Rational(7, 2));
  CHECK_FALSE(r.certified);

  const auto g = c8();
  HardCoreParams one;
  const auto c = count_hardcore_expander(g, one, 0.1);
  CHECK(c.ell == 1);
  const auto s = brute::log_series(brute::xi_poly(g, PolymerFamily::small(Side::X), 1), 1);
  CHECK(c.log_xi_x == doctest::Approx(to_double(s[1])));
  CHECK(c.log_value == doctest::Approx(4 * std::log(2.0) + std::log(2.0) + to_double(s[1])));
  const auto xs = exact_xi(g, PolymerFamily::small(Side::X), WeightModel::hardcore(1));
  CHECK(Rational(16) * *xs.value == 42);  // side term; 84 - 47 = 37 is the overlap
}

TEST_CASE("exact-mode sampler matches the mixture formula") {
  const auto g = c8();
  SamplerOptions so;
  so.mode = SamplerMode::exact;
  const ExpanderSampler s(g, Membership::expanding, with_C1(1.0), WeightModel::unweighted(), 0.1, so);
  CHECK(s.mode() == SamplerMode::exact);
  CHECK(s.side_probability(Side::X) == doctest::Approx(0.5));
  const auto out = s.output_distribution();
  const auto formula = formula_mu_hat(g, Membership::expanding, 1.0, 1);
  CHECK(total_variation_exact(out, formula) == 0);
  CHECK(total_variation(out, formula) <= 1e-9);

  const Rational empty = 2 * Rational(1, 16) / (Rational(21, 8) + Rational(21, 8));
  for (const auto& e : out)
    if (e.set.size() == 0) CHECK(e.probability == empty);

  const auto nu = brute_nu(g, PolymerFamily::expanding(Side::X, with_C1(1.0)));
  CHECK(tv(by_union(s.configuration_distribution(Side::X)), nu) <= 1e-12);

  std::mt19937_64 rng(7);
  std::map<BipartiteSet, double> freq;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const auto I = s.sample(rng);
    REQUIRE(is_independent(g, I));
    freq[I] += 1.0 / draws;
  }
  std::vector<DistributionEntry> emp;
  for (const auto& [set, f] : freq) emp.push_back({set, decimal(f)});
  CHECK(total_variation(emp, out) <= 0.02);
}

TEST_CASE("self-reducible sampler agrees with the exact configuration law") {
  for (int n : {6, 8}) {
    const auto g = generate(InstanceSpec::crown(n));
    SamplerOptions so;
    so.mode = SamplerMode::self_reducible;
    const ExpanderSampler s(g, Membership::expanding, with_C1(1.0), WeightModel::unweighted(), 0.01, so);
    CHECK(s.mode() == SamplerMode::self_reducible);
    const auto nu = brute_nu(g, PolymerFamily::expanding(Side::X, with_C1(1.0)));
    CHECK(tv(by_union(s.configuration_distribution(Side::X)), nu) <= 1e-6);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) CHECK(is_independent(g, s.sample(rng)));
  }

  const auto g = c8();
  SamplerOptions so;
  so.mode = SamplerMode::self_reducible;
  const ExpanderSampler s(g, Membership::expanding, with_C1(1.0), WeightModel::unweighted(), 0.01, so);
  double total = 0.0;
  for (const auto& c : s.configuration_distribution(Side::Y)) total += c.probability;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  const auto nu = brute_nu(g, PolymerFamily::expanding(Side::Y, with_C1(1.0)));
  MESSAGE("C8 self-reducible TV to nu: " << tv(by_union(s.configuration_distribution(Side::Y)), nu));
}

TEST_CASE("empty universes give a product subset of one side") {
  const auto g = k22();
  const ExpanderSampler s(g, Membership::expanding, ExpansionParams{}, WeightModel::unweighted(), 0.1);
  CHECK(s.universe(Side::X).count() == 0);
  for (const auto& e : s.output_distribution())
    CHECK(e.probability == (e.set.size() == 0 ? Rational(1, 4) : Rational(1, 8)));

  const ExpanderSampler h(g, Membership::small, ExpansionParams{}, WeightModel::hardcore(Rational(1, 2)), 0.1);
  for (const auto& e : h.output_distribution()) {
    const auto k = static_cast<unsigned>(e.set.size());
    const Rational side = pow(Rational(1, 3), k) * pow(Rational(2, 3), 2 - k) / 2;
    CHECK(e.probability == (k == 0 ? 2 * side : side));
  }
}

TEST_CASE("hard-core sampler") {
  const auto g = c8();
  const ExpanderSampler a(g, Membership::small, ExpansionParams{}, WeightModel::unweighted(), 0.1);
  const ExpanderSampler b(g, Membership::small, ExpansionParams{}, WeightModel::hardcore(1), 0.1);
  CHECK(total_variation_exact(a.output_distribution(), b.output_distribution()) == 0);
  CHECK(total_variation_exact(b.output_distribution(), formula_mu_hat(g, Membership::small, 1.0, 1)) == 0);

  const Rational lambda(1, 3);
  const ExpanderSampler w(g, Membership::small, ExpansionParams{}, WeightModel::hardcore(lambda), 0.1);
  CHECK(total_variation_exact(w.output_distribution(), formula_mu_hat(g, Membership::small, 1.0, lambda)) == 0);

  HardCoreParams big;
  big.lambda = 20;
  const double eps = 0.1;
  double mean = 0.0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) mean += static_cast<double>(sample_hardcore_expander(k22(), big, eps, i).size());
  mean /= draws;
  CHECK(mean >= 2.0 * 20.0 / 21.0 * (1.0 - eps));

  const auto one = sample_expander(g, 0.1, with_C1(1.0), 11);
  CHECK(one == sample_expander(g, 0.1, with_C1(1.0), 11));
}
