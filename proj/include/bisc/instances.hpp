#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bisc/graph.hpp"

namespace bisc {

enum class InstanceKind { hypercube, even_cycle, complete_bipartite, random_regular, even_torus, crown };

/// Parameters per kind:
///   hypercube      d
///   even_cycle     m (total vertices, even, >= 4)
///   complete_bipartite d
///   random_regular n (per side), d, seed
///   even_torus     dims (each even, >= 4)
///   crown          n: K_{n,n} minus a perfect matching, degree n-1
struct InstanceSpec {
  InstanceKind kind = InstanceKind::even_cycle;
  int d = 0;
  int m = 0;
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<int> dims;
  int max_retries = 100000;

  static InstanceSpec hypercube(int d);
  static InstanceSpec even_cycle(int m);
  static InstanceSpec complete_bipartite(int d);
  static InstanceSpec random_regular(int n, int d, std::uint64_t seed);
  static InstanceSpec even_torus(std::vector<int> dims);
  static InstanceSpec crown(int n);

  std::string describe() const;
};

BipartiteGraph generate(const InstanceSpec& spec);

const char* kind_name(InstanceKind k);
InstanceKind parse_kind(const std::string& s);

}  // namespace bisc
