#include <doctest.h>

#include <bisc/errors.hpp>
#include <bisc/general.hpp>
#include <bisc/instances.hpp>
#include <bisc/oracle.hpp>

#include <algorithm>
#include <cmath>

#include "support/brute.hpp"
#include "support/desk.hpp"

using namespace bisc;

namespace {

BipartiteGraph c8() { return generate(InstanceSpec::even_cycle(8)); }
BipartiteGraph k22() { return generate(InstanceSpec::complete_bipartite(2)); }

ExpansionParams with_C1(double c) {
  ExpansionParams p;
  p.C1 = c;
  return p;
}

int brute_D(const brute::Adjacency& a, Side s, std::uint64_t set) { return brute::count_D(a, s, set); }

std::vector<std::uint64_t> brute_closed_nonexpanding(const BipartiteGraph& g, Side s, double C1) {
  const auto a = brute::adjacency(g);
  std::vector<std::uint64_t> out;
  for (std::uint64_t set = 1; set < (std::uint64_t{1} << g.n(s)); ++set)
    if (brute::closure(a, s, set) == set && brute::two_linked(a, s, set) &&
        !brute::expanding(a, s, set, g.degree(), C1))
      out.push_back(set);
  return out;
}

}  // namespace

TEST_CASE("D examples") {
  const auto g = c8();
  const auto a = brute::adjacency(g);
  CHECK(count_D(g, g.full_set(Side::X)) == 5);
  CHECK(brute_D(a, Side::X, 0xF) == 5);
  CHECK(count_D(g, g.make_set(Side::X, {2})) == 1);
  CHECK(count_D(k22(), k22().full_set(Side::X)) == 3);

  for (const auto& h : desk::instances())
    for (double C1 : {0.5, 1.0, 2.0})
      for (std::uint64_t set : brute_closed_nonexpanding(h, Side::Y, C1)) {
        SideSet s(Side::Y, static_cast<std::size_t>(h.nY()));
        for (int v = 0; v < h.nY(); ++v)
          if ((set >> v) & 1U) s.bits.set(static_cast<std::size_t>(v));
        CHECK(count_D(h, s) == brute_D(brute::adjacency(h), Side::Y, set));
      }
}

TEST_CASE("property checks") {
  const auto g = c8();
  const auto p = with_C1(1.0);
  CHECK_NOTHROW(check_nonexpanding_closed(g, g.full_set(Side::X), p));
  CHECK_THROWS_AS(check_nonexpanding_closed(g, g.empty_set(Side::X), p), InvalidArgument);
  CHECK_THROWS_AS(check_nonexpanding_closed(g, g.make_set(Side::X, {0}), p), InvalidArgument);     // expanding
  CHECK_THROWS_AS(check_nonexpanding_closed(g, g.make_set(Side::X, {0, 2}), p), InvalidArgument);  // not 2-linked
  CHECK_THROWS_AS(check_nonexpanding_closed(g, g.make_set(Side::X, {0, 1, 2}), p), InvalidArgument);  // not closed
  CHECK_THROWS_AS(estimate_D(g, g.make_set(Side::X, {0}), p, 0.1, 0.1, 1), InvalidArgument);
}

TEST_CASE("closed non-expanding sets and families") {
  const auto g = c8();
  FamilyCensus census;
  const auto fams = enumerate_families(g, with_C1(1.0), {}, &census);
  REQUIRE(fams.size() == 2);
  CHECK(fams[0].count() == 0);
  REQUIRE(fams[1].count() == 1);
  CHECK(fams[1].sets[0] == g.full_set(Side::X));
  CHECK(census.closed_sets == 1);
  CHECK(census.by_count == std::vector<std::size_t>{1, 1});

  const auto k = enumerate_families(k22(), ExpansionParams{});
  REQUIRE(k.size() == 2);
  CHECK(k[1].sets[0] == k22().full_set(Side::X));

  // d = 1: every set passes the expansion test with log^2 d = 0.
  const auto m = enumerate_families(generate(InstanceSpec::complete_bipartite(1)), ExpansionParams{});
  CHECK(m.size() == 1);

  for (const auto& h : desk::instances()) {
    const auto a = brute::adjacency(h);
    const int n = h.nX();
    for (double C1 : {0.5, 1.0, 2.0, 100.0}) {
      const auto expect = brute_closed_nonexpanding(h, Side::X, C1);
      const auto sets = closed_nonexpanding_sets(h, Side::X, with_C1(C1));
      std::vector<std::uint64_t> got;
      for (const auto& s : sets) got.push_back(brute::mask_of(s.bits));
      std::sort(got.begin(), got.end());
      CHECK(got == expect);

      // Families: subsets of the closed list with pairwise disjoint neighborhoods.
      std::size_t expected_families = 0;
      std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t from, std::uint64_t used) {
        ++expected_families;
        for (std::size_t i = from; i < expect.size(); ++i) {
          const std::uint64_t nb = brute::nbhd(a, Side::X, expect[i]);
          if (nb & used) continue;
          rec(i + 1, used | nb);
        }
      };
      rec(0, 0);
      FamilyOptions fo;
      const auto fams_h = enumerate_families(h, with_C1(C1), fo);
      CHECK(fams_h.size() == expected_families);
      for (const auto& f : fams_h) {
        CHECK(static_cast<int>(f.count()) * h.degree() <= n);
        int total = 0;
        for (int sz : f.sizes) total += sz;
        CHECK(total <= n);
        for (std::size_t i = 0; i + 1 < f.count(); ++i) CHECK(f.anchors[i] < f.anchors[i + 1]);
      }
    }
  }
}

TEST_CASE("D estimator") {
  const auto g = c8();
  const auto p = with_C1(1.0);
  CHECK(d_sample_count(0.1, 0.05, 2) == static_cast<std::uint64_t>(std::ceil(300.0 * std::log(40.0) * 4)));
  CHECK(d_sample_count(5.0, 0.05, 0) == d_sample_count(1.0, 0.05, 0));

  const auto full = g.full_set(Side::X);
  const DEstimate e = estimate_D(g, full, p, 0.1, 0.05, 1);
  CHECK(e.p_lower == doctest::Approx(std::exp2(-e.a_double_prime)));
  CHECK(e.samples_used == d_sample_count(0.1, 0.05, e.a_double_prime));
  CHECK(std::fabs(e.value - 5.0) <= 0.5);

  // Singleton: only B = A hits.
  const auto single_graph = generate(InstanceSpec::hypercube(3));
  const auto single = single_graph.make_set(Side::X, {0});
  if (!is_expanding(single_graph, single, with_C1(100.0))) {
    const auto s = estimate_D(single_graph, single, with_C1(100.0), 0.1, 0.05, 3);
    CHECK(s.value == 1.0);
  }

  const auto big = estimate_D(g, full, p, 50.0, 0.5, 2);
  CHECK(big.value >= 1.0);
  CHECK(big.value <= 15.0);

  int good = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed)
    good += std::fabs(estimate_D(g, full, p, 0.1, 0.05, seed).value - 5.0) <= 0.5;
  CHECK(good >= 95);
}

TEST_CASE("exact assembly reproduces i(G)") {
  const auto c = count_general(c8(), 0.05, 0.05, 1, with_C1(1.0), GeneralOptions{true});
  REQUIRE(c.count.exact);
  CHECK(*c.count.exact == 47);
  CHECK(c.restriction_checks == 2);
  const auto k = count_general(k22(), 0.05, 0.05, 1, ExpansionParams{}, GeneralOptions{true});
  CHECK(*k.count.exact == 7);

  std::vector<BipartiteGraph> graphs = desk::instances();
  for (std::uint64_t seed = 100; graphs.size() < 26; ++seed) {
    const int n = 9 + static_cast<int>(seed % 2);
    const int d = 2 + static_cast<int>(seed % 3);
    if ((n * d) % 2) continue;
    graphs.push_back(generate(InstanceSpec::random_regular(n, d, seed)));
  }
  graphs.push_back(generate(InstanceSpec::complete_bipartite(1)));
  for (const auto& h : graphs)
    for (double C1 : {0.5, 1.0, 2.0, 100.0}) {
      const auto r = count_general(h, 0.05, 0.05, 1, with_C1(C1), GeneralOptions{true});
      REQUIRE(r.count.exact);
      CHECK(*r.count.exact == exact_count_bipartite(h).value);
    }
}

TEST_CASE("Monte Carlo assembly") {
  const auto g = c8();
  const auto r = count_general(g, 0.05, 0.05, 9, with_C1(1.0));
  CHECK(r.L == 8);
  CHECK_FALSE(r.large_degree);
  CHECK(r.eps_d == doctest::Approx(0.05 / 8));
  CHECK(r.delta_d == doctest::Approx(0.05));
  CHECK(r.census.families == 2);
  CHECK(std::fabs(std::exp(r.count.log_value) / 47.0 - 1.0) <= 0.05);

  const auto k = count_general(k22(), 0.05, 0.05, 9, ExpansionParams{});
  CHECK(k.large_degree);
  CHECK(std::fabs(std::exp(k.count.log_value) / 7.0 - 1.0) <= 0.05);

  CHECK_THROWS_AS(count_general(g, 0.0, 0.05, 1, ExpansionParams{}), InvalidArgument);
  CHECK_THROWS_AS(count_general(g, 0.1, 1.0, 1, ExpansionParams{}), InvalidArgument);
}

TEST_CASE("Monte Carlo assembly over seeds") {
  const std::vector<std::pair<BipartiteGraph, double>> cases = {{c8(), 1.0}, {k22(), 100.0}};
  for (const auto& [h, C1] : cases) {
    const double truth = exact_count_bipartite(h).value.convert_to<double>();
    int good = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const auto r = count_general(h, 0.05, 0.05, seed, with_C1(C1));
      CHECK(r.restriction_checks == (r.large_degree ? 0U : r.census.families));
      good += std::fabs(std::exp(r.count.log_value) / truth - 1.0) <= 0.05;
    }
    CHECK(good >= 190);
  }
}

TEST_CASE("large degree drops the restricted partition function") {
  // Q3 has d = 3 > sqrt(4). Families on X with C1 = 1 are {} and {X}, so the
  // approximate sum is 2^4 + D(X), short of i(Q3) = 35.
  const auto g = generate(InstanceSpec::hypercube(3));
  const auto p = with_C1(1.0);
  const auto expect = brute_closed_nonexpanding(g, Side::X, 1.0);
  REQUIRE(expect == std::vector<std::uint64_t>{0xF});
  const double oracle = 16.0 + brute_D(brute::adjacency(g), Side::X, 0xF);
  const auto r = count_general(g, 0.05, 0.05, 4, p);
  CHECK(r.large_degree);
  CHECK(std::fabs(std::exp(r.count.log_value) / oracle - 1.0) <= 0.05);
  CHECK(std::isinf(r.count.rel_error_bound));
  CHECK_FALSE(r.count.certified);
  const auto e = count_general(g, 0.05, 0.05, 4, p, GeneralOptions{true});
  CHECK(*e.count.exact == 35);
}
