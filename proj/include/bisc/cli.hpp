#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace bisc::cli {

/// Every knob of one run. Defaults are filled in before execution and the whole
/// struct is written back into the result, so a result can be replayed.
struct RunConfig {
  std::string subcommand;  // gen, count, sample, verify-kp, certify, check-expander, bench
  std::string graph;
  std::string mode;  // count: oracle, oracle-general, expander, hardcore, general, general-exact
  double epsilon = 0.1;
  double delta = 0.05;
  std::string lambda;  // "p/q"; empty for the unweighted model
  bool float_lambda = false;
  std::uint64_t seed = 1;
  double C1 = 100.0;
  std::string alpha = "1";
  double c4 = 1.0;
  double c5 = 1.0;
  std::string side = "X";
  int ell = 0;  // verify-kp size cap; 0 picks choose_ell
  int T = 2;
  int samples = 1;
  std::string sampler_mode = "automatic";
  std::string check_mode = "exhaustive";
  bool allow_brute = true;
  bool verify_kp = false;
  // caps
  int oracle_cap = 30;
  std::size_t max_polymers = 20000;
  int exact_cap = 24;
  std::uint64_t max_samples = 4'000'000'000ULL;
  std::uint64_t max_certificates = 5'000'000;
  // gen / bench instance
  std::string kind = "cycle";
  int m = 8;
  int d = 3;
  int n = 8;
  std::vector<int> dims;
  std::vector<int> sizes;  // bench: the size parameter per row
  std::string modes = "oracle,expander,general";
  int workers = 0;  // 0 = available parallelism
  std::string output;
};

nlohmann::json to_json(const RunConfig& c);
RunConfig from_json(const nlohmann::json& j);

/// Runs the configuration and returns the result document (schema 1).
/// Exceptions propagate; `run` maps them to exit codes.
nlohmann::json execute(const RunConfig& c, std::ostream* csv = nullptr);

/// Parses argv, executes, writes JSON (or CSV for bench) to `out` or to the
/// configured output path, diagnostics to `err`. Exit codes: 0 success,
/// 2 invalid input, 3 capacity exceeded, 4 internal error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bisc::cli
