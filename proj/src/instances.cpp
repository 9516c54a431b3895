#include "bisc/instances.hpp"

#include <algorithm>
#include <random>

#include "bisc/errors.hpp"
#include "bisc/numeric.hpp"

namespace bisc {

InstanceSpec InstanceSpec::hypercube(int d) {
  InstanceSpec s;
  s.kind = InstanceKind::hypercube;
  s.d = d;
  return s;
}

InstanceSpec InstanceSpec::even_cycle(int m) {
  InstanceSpec s;
  s.kind = InstanceKind::even_cycle;
  s.m = m;
  return s;
}

InstanceSpec InstanceSpec::complete_bipartite(int d) {
  InstanceSpec s;
  s.kind = InstanceKind::complete_bipartite;
  s.d = d;
  return s;
}

InstanceSpec InstanceSpec::random_regular(int n, int d, std::uint64_t seed) {
  InstanceSpec s;
  s.kind = InstanceKind::random_regular;
  s.n = n;
  s.d = d;
  s.seed = seed;
  return s;
}

InstanceSpec InstanceSpec::even_torus(std::vector<int> dims) {
  InstanceSpec s;
  s.kind = InstanceKind::even_torus;
  s.dims = std::move(dims);
  return s;
}

InstanceSpec InstanceSpec::crown(int n) {
  InstanceSpec s;
  s.kind = InstanceKind::crown;
  s.n = n;
  return s;
}

const char* kind_name(InstanceKind k) {
  switch (k) {
    case InstanceKind::hypercube: return "hypercube";
    case InstanceKind::even_cycle: return "cycle";
    case InstanceKind::complete_bipartite: return "complete";
    case InstanceKind::random_regular: return "random";
    case InstanceKind::even_torus: return "torus";
    case InstanceKind::crown: return "crown";
  }
  return "?";
}

InstanceKind parse_kind(const std::string& s) {
  for (auto k : {InstanceKind::hypercube, InstanceKind::even_cycle, InstanceKind::complete_bipartite,
                 InstanceKind::random_regular, InstanceKind::even_torus, InstanceKind::crown})
    if (s == kind_name(k)) return k;
  throw InvalidArgument("unknown instance kind '" + s + "'");
}

std::string InstanceSpec::describe() const {
  std::string out = kind_name(kind);
  switch (kind) {
    case InstanceKind::hypercube:
    case InstanceKind::complete_bipartite: return out + " d=" + std::to_string(d);
    case InstanceKind::even_cycle: return out + " m=" + std::to_string(m);
    case InstanceKind::random_regular:
      return out + " n=" + std::to_string(n) + " d=" + std::to_string(d) + " seed=" + std::to_string(seed);
    case InstanceKind::crown: return out + " n=" + std::to_string(n);
    case InstanceKind::even_torus: {
      out += " dims=";
      for (std::size_t i = 0; i < dims.size(); ++i) out += (i ? "x" : "") + std::to_string(dims[i]);
      return out;
    }
  }
  return out;
}

namespace {

BipartiteGraph make_hypercube(int d) {
  if (d < 1 || d > 20) throw InvalidArgument("hypercube dimension must be in [1,20]");
  const int total = 1 << d;
  std::vector<int> index(static_cast<std::size_t>(total));
  int ex = 0, od = 0;
  for (int v = 0; v < total; ++v) index[static_cast<std::size_t>(v)] = std::popcount(static_cast<unsigned>(v)) % 2 ? od++ : ex++;
  std::vector<BipartiteGraph::Edge> edges;
  for (int v = 0; v < total; ++v) {
    if (std::popcount(static_cast<unsigned>(v)) % 2) continue;
    for (int b = 0; b < d; ++b) edges.emplace_back(index[static_cast<std::size_t>(v)], index[static_cast<std::size_t>(v ^ (1 << b))]);
  }
  return BipartiteGraph(total / 2, total / 2, d, edges);
}

BipartiteGraph make_cycle(int m) {
  if (m < 4 || m % 2) throw InvalidArgument("even_cycle needs an even m >= 4");
  const int n = m / 2;
  std::vector<BipartiteGraph::Edge> edges;
  // Cycle order x0 y0 x1 y1 ... : N(x_i) = {y_{i-1}, y_i}.
  for (int i = 0; i < n; ++i) {
    edges.emplace_back(i, i);
    edges.emplace_back(i, (i + n - 1) % n);
  }
  return BipartiteGraph(n, n, 2, edges);
}

BipartiteGraph make_complete(int d) {
  if (d < 1) throw InvalidArgument("complete_bipartite needs d >= 1");
  std::vector<BipartiteGraph::Edge> edges;
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) edges.emplace_back(x, y);
  return BipartiteGraph(d, d, d, edges);
}

BipartiteGraph make_crown(int n) {
  if (n < 2) throw InvalidArgument("crown needs n >= 2");
  std::vector<BipartiteGraph::Edge> edges;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (x != y) edges.emplace_back(x, y);
  return BipartiteGraph(n, n, n - 1, edges);
}

BipartiteGraph make_torus(const std::vector<int>& dims) {
  if (dims.empty()) throw InvalidArgument("torus needs at least one dimension");
  long long total = 1;
  for (int L : dims) {
    if (L < 4 || L % 2) throw InvalidArgument("torus side lengths must be even and >= 4");
    total *= L;
    if (total > (1LL << 22)) throw InvalidArgument("torus too large");
  }
  const int k = static_cast<int>(dims.size());
  auto coords = [&](long long v) {
    std::vector<int> c(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      c[static_cast<std::size_t>(i)] = static_cast<int>(v % dims[static_cast<std::size_t>(i)]);
      v /= dims[static_cast<std::size_t>(i)];
    }
    return c;
  };
  auto encode = [&](const std::vector<int>& c) {
    long long v = 0;
    for (int i = k - 1; i >= 0; --i) v = v * dims[static_cast<std::size_t>(i)] + c[static_cast<std::size_t>(i)];
    return v;
  };
  std::vector<int> index(static_cast<std::size_t>(total));
  std::vector<char> parity(static_cast<std::size_t>(total));
  int ex = 0, od = 0;
  for (long long v = 0; v < total; ++v) {
    auto c = coords(v);
    int s = 0;
    for (int x : c) s += x;
    parity[static_cast<std::size_t>(v)] = static_cast<char>(s % 2);
    index[static_cast<std::size_t>(v)] = s % 2 ? od++ : ex++;
  }
  std::vector<BipartiteGraph::Edge> edges;
  for (long long v = 0; v < total; ++v) {
    if (parity[static_cast<std::size_t>(v)]) continue;
    auto c = coords(v);
    for (int i = 0; i < k; ++i)
      for (int step : {1, -1}) {
        auto c2 = c;
        const int L = dims[static_cast<std::size_t>(i)];
        c2[static_cast<std::size_t>(i)] = (c2[static_cast<std::size_t>(i)] + step + L) % L;
        edges.emplace_back(index[static_cast<std::size_t>(v)], index[static_cast<std::size_t>(encode(c2))]);
      }
  }
  return BipartiteGraph(static_cast<int>(total / 2), static_cast<int>(total / 2), 2 * k, edges);
}

// One attempt of the configuration model: match X-stubs to a uniformly shuffled
// list of Y-stubs and reject on a repeated pair. Returns false on rejection.
bool configuration_attempt(int n, int d, std::mt19937_64& rng, std::vector<BipartiteGraph::Edge>& edges) {
  std::vector<int> ystubs(static_cast<std::size_t>(n * d));
  for (int i = 0; i < n * d; ++i) ystubs[static_cast<std::size_t>(i)] = i / d;
  for (std::size_t i = ystubs.size(); i > 1; --i)
    std::swap(ystubs[i - 1], ystubs[uniform_below(rng, i)]);
  std::vector<BitSet> rows(static_cast<std::size_t>(n), BitSet(static_cast<std::size_t>(n)));
  edges.clear();
  for (int i = 0; i < n * d; ++i) {
    const int x = i / d, y = ystubs[static_cast<std::size_t>(i)];
    if (rows[static_cast<std::size_t>(x)].test(static_cast<std::size_t>(y))) return false;
    rows[static_cast<std::size_t>(x)].set(static_cast<std::size_t>(y));
    edges.emplace_back(x, y);
  }
  return true;
}

// Pairing that only offers Y-stubs not yet adjacent to the current X-vertex;
// restarts when stuck. Used when plain rejection would essentially never succeed.
bool restricted_attempt(int n, int d, std::mt19937_64& rng, std::vector<BipartiteGraph::Edge>& edges) {
  std::vector<int> ystubs(static_cast<std::size_t>(n * d));
  for (int i = 0; i < n * d; ++i) ystubs[static_cast<std::size_t>(i)] = i / d;
  std::vector<BitSet> rows(static_cast<std::size_t>(n), BitSet(static_cast<std::size_t>(n)));
  edges.clear();
  std::vector<std::size_t> allowed;
  for (int i = 0; i < n * d; ++i) {
    const int x = i / d;
    allowed.clear();
    for (std::size_t j = 0; j < ystubs.size(); ++j)
      if (!rows[static_cast<std::size_t>(x)].test(static_cast<std::size_t>(ystubs[j]))) allowed.push_back(j);
    if (allowed.empty()) return false;
    const std::size_t pick = allowed[uniform_below(rng, allowed.size())];
    const int y = ystubs[pick];
    ystubs[pick] = ystubs.back();
    ystubs.pop_back();
    rows[static_cast<std::size_t>(x)].set(static_cast<std::size_t>(y));
    edges.emplace_back(x, y);
  }
  return true;
}

BipartiteGraph make_random(const InstanceSpec& spec) {
  const int n = spec.n, d = spec.d;
  if (n < 1 || d < 1) throw InvalidArgument("random_regular needs n >= 1 and d >= 1");
  if (d > n) throw InvalidArgument("random_regular needs d <= n");
  if ((static_cast<long long>(n) * d) % 2) throw InvalidArgument("random_regular needs n*d even");
  // Dense case: build the (n-d)-regular complement instead.
  const bool complement = 2 * d > n;
  const int k = complement ? n - d : d;
  std::mt19937_64 rng(spec.seed);
  std::vector<BipartiteGraph::Edge> edges;
  if (k > 0) {
    // Plain rejection succeeds with probability about exp(-(k-1)^2/2).
    const bool plain = (k - 1) * (k - 1) <= 18;
    int attempt = 0;
    while (!(plain ? configuration_attempt(n, k, rng, edges) : restricted_attempt(n, k, rng, edges)))
      if (++attempt >= spec.max_retries)
        throw CapacityError("random_regular: no simple graph after " + std::to_string(spec.max_retries) + " attempts");
  }
  if (!complement) return BipartiteGraph(n, n, d, edges);
  std::vector<BitSet> rows(static_cast<std::size_t>(n), BitSet(static_cast<std::size_t>(n)));
  for (const auto& [x, y] : edges) rows[static_cast<std::size_t>(x)].set(static_cast<std::size_t>(y));
  std::vector<BipartiteGraph::Edge> out;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (!rows[static_cast<std::size_t>(x)].test(static_cast<std::size_t>(y))) out.emplace_back(x, y);
  return BipartiteGraph(n, n, d, out);
}

}  // namespace

BipartiteGraph generate(const InstanceSpec& spec) {
  switch (spec.kind) {
    case InstanceKind::hypercube: return make_hypercube(spec.d);
    case InstanceKind::even_cycle: return make_cycle(spec.m);
    case InstanceKind::complete_bipartite: return make_complete(spec.d);
    case InstanceKind::random_regular: return make_random(spec);
    case InstanceKind::even_torus: return make_torus(spec.dims);
    case InstanceKind::crown: return make_crown(spec.n);
  }
  throw InvalidArgument("unknown instance kind");
}

}  // namespace bisc
