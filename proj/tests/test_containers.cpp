#include <doctest.h>

#include <bisc/containers.hpp>
#include <bisc/errors.hpp>
#include <bisc/instances.hpp>

#include <cmath>
#include <map>
#include <random>

#include "support/brute.hpp"

using namespace bisc;

namespace {

using brute::mask_of;
using brute::set_of;

bool brute_essential(const brute::Adjacency& adj, Side s, std::uint64_t f, std::uint64_t a, int d) {
  return brute::essential(adj, s, f, a, d);
}

std::vector<BipartiteGraph> small_instances(int count, int max_n, std::uint64_t seed0) {
  std::vector<BipartiteGraph> out;
  for (std::uint64_t seed = seed0; static_cast<int>(out.size()) < count; ++seed) {
    const int n = 3 + static_cast<int>(seed % static_cast<std::uint64_t>(max_n - 2));
    const int d = 2 + static_cast<int>((seed / 7) % 4);
    if (d > n || (n * d) % 2) continue;
    out.push_back(generate(InstanceSpec::random_regular(n, d, seed)));
  }
  return out;
}

}  // namespace

TEST_CASE("greedy cover examples") {
  CoverInstance h{3, 2, {{0, 1}, {1, 2}}};
  const auto q = greedy_cover(h, 1, 2);
  CHECK(q == std::vector<int>{0, 1});
  CHECK(q.size() <= cover_bound(2, 1, 2));
  CoverInstance one{3, 2, {{0, 1, 2}, {1}}};
  CHECK(greedy_cover(one, 1, 3) == std::vector<int>{0});
  // K_{d,d} incidence.
  const int d = 4;
  CoverInstance kdd{d, d, std::vector<std::vector<int>>(d, std::vector<int>{0, 1, 2, 3})};
  const auto k = greedy_cover(kdd, d, d);
  CHECK(k.size() == 1);
  CHECK(k.size() <= cover_bound(d, d, d));
  CoverInstance bad{2, 1, {{0}}};
  CHECK_THROWS_AS(greedy_cover(bad, 1, 1), InvalidArgument);
}

TEST_CASE("greedy cover meets the Lovasz-Stein bound") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const int p = 5 + static_cast<int>(uniform_below(rng, 30));
    const int qn = 3 + static_cast<int>(uniform_below(rng, 20));
    CoverInstance h{p, qn, std::vector<std::vector<int>>(static_cast<std::size_t>(qn))};
    for (int i = 0; i < p; ++i) {
      const int deg = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(std::min(qn, 4))));
      std::vector<int> qs;
      while (static_cast<int>(qs.size()) < deg) {
        const int q = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(qn)));
        if (std::find(qs.begin(), qs.end(), q) == qs.end()) qs.push_back(q);
      }
      for (int q : qs) h.q_to_p[static_cast<std::size_t>(q)].push_back(i);
    }
    int a = qn, b = 1;
    std::vector<int> pdeg(static_cast<std::size_t>(p), 0);
    for (const auto& ps : h.q_to_p) {
      b = std::max(b, static_cast<int>(ps.size()));
      for (int x : ps) ++pdeg[static_cast<std::size_t>(x)];
    }
    for (int x : pdeg) a = std::min(a, x);
    const auto q = greedy_cover(h, a, b);
    BitSet covered(static_cast<std::size_t>(p));
    for (int x : q)
      for (int y : h.q_to_p[static_cast<std::size_t>(x)]) covered.set(static_cast<std::size_t>(y));
    CHECK(covered.count() == static_cast<std::size_t>(p));
    CHECK(static_cast<double>(q.size()) <= cover_bound(qn, a, b) + 1e-9);
  }
}

TEST_CASE("small generator examples") {
  const auto k22 = generate(InstanceSpec::complete_bipartite(2));
  auto sg = small_generator(k22, k22.full_set(Side::X), {});
  CHECK(sg.a_prime == k22.make_set(Side::X, {0}));
  CHECK(sg.a_double_prime == k22.make_set(Side::X, {0}));

  const auto c8 = generate(InstanceSpec::even_cycle(8));
  sg = small_generator(c8, c8.make_set(Side::X, {2}), {});
  CHECK(sg.a_prime == c8.make_set(Side::X, {2}));
  CHECK(sg.a_double_prime == c8.make_set(Side::X, {2}));

  sg = small_generator(c8, c8.make_set(Side::X, {0, 1}), {});
  CHECK(neighborhood(c8, sg.a_double_prime) == c8.make_set(Side::Y, {3, 0, 1}));
  CHECK(sg.a_double_prime.size() <= small_generator_bound_double_prime(2, 3, 2));
  CHECK_THROWS_AS(small_generator(c8, c8.make_set(Side::X, {0, 2}), {}), InvalidArgument);
}

TEST_CASE("small generator guarantees on random instances") {
  int checked = 0, prime_over = 0, double_over = 0;
  for (const auto& g : small_instances(25, 9, 11)) {
    const auto adj = brute::adjacency(g);
    const int d = g.degree();
    for (Side s : {Side::X, Side::Y})
      for (std::uint64_t m = 1; m < (std::uint64_t{1} << g.n(s)); ++m) {
        if (!brute::two_linked(adj, s, m)) continue;
        const SideSet A = set_of(g, s, m);
        const auto sg = small_generator(g, A, {});
        const std::uint64_t ap = mask_of(sg.a_prime.bits), app = mask_of(sg.a_double_prime.bits);
        CHECK((ap & ~m) == 0);
        CHECK((ap & ~app) == 0);
        CHECK((app & ~m) == 0);
        CHECK(((ap >> sg.anchor) & 1U));
        CHECK(brute::two_linked(adj, s, ap));
        CHECK(brute::two_linked(adj, s, app));
        CHECK(brute_essential(adj, s, brute::nbhd(adj, s, ap), m, d));
        CHECK(brute::nbhd(adj, s, app) == brute::nbhd(adj, s, m));
        const int a = std::popcount(brute::closure(adj, s, m));
        const int w = std::popcount(brute::nbhd(adj, s, m));
        if (std::popcount(ap) > small_generator_bound_prime(a, w, d) + 1e-9) ++prime_over;
        if (std::popcount(app) > small_generator_bound_double_prime(a, w, d) + 1e-9) ++double_over;
        ++checked;
      }
  }
  MESSAGE("sets checked: " << checked << ", A' over bound: " << prime_over << ", A'' over bound: " << double_over);
  CHECK(prime_over == 0);
  CHECK(double_over == 0);
}

TEST_CASE("essential candidate examples") {
  const auto c8 = generate(InstanceSpec::even_cycle(8));
  CHECK(candidate_size_cap(2, 2) == 3);
  auto fam = enumerate_essential_candidates(c8, Side::X, 0, 2);
  // B in {x0}, {x0,x1}, {x3,x0}, and the 3-arcs through x0.
  auto has = [&](std::initializer_list<std::size_t> ys) {
    return std::find(fam.begin(), fam.end(), c8.make_set(Side::Y, ys)) != fam.end();
  };
  CHECK(has({0, 3}));
  CHECK(has({0, 1, 3}));
  CHECK(has({0, 2, 3}));
  CHECK(std::is_sorted(fam.begin(), fam.end()));
  const auto k22 = generate(InstanceSpec::complete_bipartite(2));
  fam = enumerate_essential_candidates(k22, Side::X, 0, 2);
  REQUIRE(fam.size() == 1);
  CHECK(fam[0] == k22.full_set(Side::Y));
}

TEST_CASE("walk enumeration produces the connected-set family") {
  for (const auto& g : {generate(InstanceSpec::even_cycle(8)), generate(InstanceSpec::even_cycle(12)),
                        generate(InstanceSpec::complete_bipartite(3)), generate(InstanceSpec::hypercube(3))}) {
    for (int w = g.degree(); w <= std::min(g.nY(), 4); ++w) {
      if (std::pow(g.degree() * (g.degree() - 1) + 1.0, candidate_walk_length(w, g.degree())) > 2e7) continue;
      CHECK(enumerate_essential_candidates(g, Side::X, 0, w, CandidateMethod::walk) ==
            enumerate_essential_candidates(g, Side::X, 0, w, CandidateMethod::connected));
    }
  }
}

TEST_CASE("essential-subset guarantee, every 2-linked set on small instances") {
  int checked = 0;
  for (const auto& g : small_instances(40, 10, 101)) {
    const auto adj = brute::adjacency(g);
    for (Side s : {Side::X, Side::Y})
      for (int v = 0; v < g.n(s); ++v) {
        std::map<int, std::vector<SideSet>> fams;
        for (std::uint64_t m = 1; m < (std::uint64_t{1} << g.n(s)); ++m) {
          if (!((m >> v) & 1U) || !brute::two_linked(adj, s, m)) continue;
          const int w = std::popcount(brute::nbhd(adj, s, m));
          auto it = fams.find(w);
          if (it == fams.end()) it = fams.emplace(w, enumerate_essential_candidates(g, s, v, w)).first;
          bool ok = false;
          for (const auto& f : it->second)
            if (brute_essential(adj, s, mask_of(f.bits), m, g.degree())) {
              ok = true;
              break;
            }
          CHECK(ok);
          ++checked;
        }
      }
  }
  MESSAGE("2-linked sets checked: " << checked);
}

TEST_CASE("non-expanding closed sets: examples") {
  const auto c8 = generate(InstanceSpec::even_cycle(8));
  const ExpansionParams p{1.0, 1.0};
  auto r = enumerate_nonexpanding_closed(c8, Side::X, 0, 4, p);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == c8.full_set(Side::X));
  CHECK(enumerate_nonexpanding_closed(c8, Side::X, 0, 1, p).empty());
  CHECK(enumerate_nonexpanding_closed(c8, Side::X, 0, 3, p).empty());
  CHECK(boundary_size_range(4, 4, 2, 1.0) == std::pair<int, int>{4, 4});
  CHECK_THROWS_AS(enumerate_nonexpanding_closed(c8, Side::X, 0, 0, p), InvalidArgument);
}

TEST_CASE("non-expanding closed sets match brute force") {
  int instances = 0;
  for (const auto& g : small_instances(30, 10, 500)) {
    const auto adj = brute::adjacency(g);
    for (double C1 : {1.0, 3.0}) {
      const ExpansionParams p{C1, 1.0};
      for (Side s : {Side::X, Side::Y}) {
        NonExpandingEnumerator e(g, s, p);
        for (int v = 0; v < g.n(s); ++v)
          for (int a = 1; a <= g.n(s); ++a) {
            std::vector<SideSet> expect;
            for (std::uint64_t m = 1; m < (std::uint64_t{1} << g.n(s)); ++m)
              if (((m >> v) & 1U) && std::popcount(m) == a && brute::closure(adj, s, m) == m &&
                  brute::two_linked(adj, s, m) && !brute::expanding(adj, s, m, g.degree(), C1))
                expect.push_back(set_of(g, s, m));
            std::sort(expect.begin(), expect.end());
            CHECK(e.enumerate(v, a) == expect);
          }
      }
    }
    ++instances;
  }
  CHECK(instances == 30);
}

TEST_CASE("certificate examples") {
  const auto c8 = SimpleGraph::from_bipartite(generate(InstanceSpec::even_cycle(8)));
  BitSet xs(8, {0, 1, 2, 3});
  auto c0 = compute_certificate(c8, xs, 0);
  CHECK(c0.steps == 0);
  auto r0 = certificate_region(c8, c0);
  CHECK(r0.region.count() == 8);
  CHECK(r0.forced.none());

  // All degrees equal: the loop takes x0 (in I), removing y0,y3; then x2, y1, y2 keep
  // degree 2 and x2 wins the tie.
  auto c = compute_certificate(c8, xs, 2);
  CHECK(std::count(c.xi.begin(), c.xi.end(), 1) == 2);
  CHECK(c.steps == 2);
  CHECK(c.xi[0] == 1);
  CHECK(c.xi[1] == 1);
  auto r = certificate_region(c8, c);
  CHECK(r.forced == BitSet(8, {0, 2}));
  CHECK(r.region == BitSet(8, {1, 3}));
  CHECK(r.region.count() <= 6);
  CHECK(((r.region & xs) | r.forced) == xs);

  Certificate bad = c;
  bad.T = 3;
  CHECK_THROWS_AS(certificate_region(c8, bad), MalformedCertificate);
  SimpleGraph edge(2);
  edge.add_edge(0, 1);
  Certificate overrun{{1, 1}, 2, 2, {0, 1}};
  CHECK_THROWS_AS(certificate_region(edge, overrun), MalformedCertificate);
  CHECK_THROWS_AS(compute_certificate(c8, BitSet(8, {0, 4}), 1), InvalidArgument);
  CHECK_THROWS_AS(compute_certificate(c8, BitSet(8, {0}), 2), InvalidArgument);
}

TEST_CASE("certificate identity and bijection") {
  const auto c8 = SimpleGraph::from_bipartite(generate(InstanceSpec::even_cycle(8)));
  for (int T : {0, 1, 2, 3}) CHECK(count_via_certificates(c8, T).total() == 47);
  const auto k22 = SimpleGraph::from_bipartite(generate(InstanceSpec::complete_bipartite(2)));
  auto cc = count_via_certificates(k22, 1);
  CHECK(cc.below_T == 1);
  CHECK(cc.at_least_T == 6);

  // Bijection I -> (xi, I within V_xi), exhaustively on small graphs.
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto bg = generate(InstanceSpec::random_regular(6 + 2 * static_cast<int>(seed % 2), 2 + static_cast<int>(seed % 2), seed));
    const auto g = SimpleGraph::from_bipartite(bg);
    const int n = g.size();
    for (int T : {1, 2}) {
      std::map<std::pair<std::vector<std::uint8_t>, BitSet>, int> seen;
      std::uint64_t count = 0;
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
        BitSet s(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
          if ((m >> i) & 1U) s.set(static_cast<std::size_t>(i));
        if (!g.is_independent(s) || static_cast<int>(s.count()) < T) continue;
        const auto c = compute_certificate(g, s, T);
        const auto r = certificate_region(g, c);
        CHECK(r.forced.subset_of(s));
        CHECK(((s & r.region) | r.forced) == s);
        CHECK((s - r.forced - r.region).none());
        CHECK(++seen[{c.xi, s & r.region}] == 1);
        ++count;
      }
      const auto via = count_via_certificates(g, T);
      CHECK(via.at_least_T == count);
    }
  }
}
