#include "bisc/cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "bisc/cluster_expansion.hpp"
#include "bisc/containers.hpp"
#include "bisc/errors.hpp"
#include "bisc/expander.hpp"
#include "bisc/general.hpp"
#include "bisc/graph_io.hpp"
#include "bisc/instances.hpp"
#include "bisc/oracle.hpp"
#include "bisc/simple_graph.hpp"

namespace bisc::cli {

using nlohmann::json;

namespace {

constexpr int kSchema = 1;

Side parse_side(const std::string& s) {
  if (s == "X" || s == "x") return Side::X;
  if (s == "Y" || s == "y") return Side::Y;
  throw InvalidArgument("side must be X or Y, got '" + s + "'");
}

Rational lambda_of(const RunConfig& c) {
  if (c.lambda.empty()) return Rational(1);
  if (c.float_lambda) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(c.lambda, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("--lambda: not a number: '" + c.lambda + "'");
    }
    if (used != c.lambda.size() || !std::isfinite(v)) throw InvalidArgument("--lambda: not a number: '" + c.lambda + "'");
    return Rational(v);
  }
  try {
    return parse_rational(c.lambda);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(std::string(e.what()) + " (use p/q, or pass --float-lambda for floating input)");
  }
}

ExpansionParams params_of(const RunConfig& c) {
  ExpansionParams p;
  p.C1 = c.C1;
  p.alpha = to_double(parse_rational(c.alpha));
  p.validate();
  return p;
}

HardCoreParams hardcore_of(const RunConfig& c) {
  HardCoreParams hp;
  hp.lambda = lambda_of(c);
  hp.alpha = parse_rational(c.alpha);
  hp.c4 = c.c4;
  hp.c5 = c.c5;
  hp.validate();
  return hp;
}

InstanceSpec instance_of(const RunConfig& c, std::optional<int> size = std::nullopt) {
  switch (parse_kind(c.kind)) {
    case InstanceKind::hypercube: return InstanceSpec::hypercube(size.value_or(c.d));
    case InstanceKind::even_cycle: return InstanceSpec::even_cycle(size.value_or(c.m));
    case InstanceKind::complete_bipartite: return InstanceSpec::complete_bipartite(size.value_or(c.d));
    case InstanceKind::random_regular: return InstanceSpec::random_regular(size.value_or(c.n), c.d, c.seed);
    case InstanceKind::crown: return InstanceSpec::crown(size.value_or(c.n));
    case InstanceKind::even_torus: {
      auto dims = c.dims;
      if (size) dims.assign(dims.empty() ? 2 : dims.size(), *size);
      return InstanceSpec::even_torus(dims);
    }
  }
  throw InvalidArgument("unknown instance kind");
}

json set_json(const BitSet& b) { return b.members(); }

json bipartite_set_json(const BipartiteSet& s) { return json{{"x", set_json(s.x)}, {"y", set_json(s.y)}}; }

json approx_json(const ApproxCount& a) {
  json j;
  j["log_value"] = json(a.log_value);
  if (a.exact)
    j["value"] = a.exact->str();
  else if (a.exact_weighted)
    j["value"] = to_string(*a.exact_weighted);
  j["decimal"] = decimal_from_log(a.log_value);
  j["rel_error_bound"] = std::isfinite(a.rel_error_bound) ? json(a.rel_error_bound) : json("inf");
  j["method"] = a.method;
  j["kp_status"] = kp_status_name(a.kp_status);
  j["certified"] = a.certified;
  j["ell"] = a.ell;
  j["eps0"] = json(a.eps0);
  j["log_xi_x"] = json(a.log_xi_x);
  j["log_xi_y"] = json(a.log_xi_y);
  j["notes"] = a.notes;
  return j;
}

json census_json(const FamilyCensus& c) {
  return json{{"closed_sets", c.closed_sets},
              {"families", c.families},
              {"by_count", c.by_count},
              {"size_vectors", c.size_vectors},
              {"candidate_sets", c.enumerator.candidate_sets},
              {"boundaries_listed", c.enumerator.boundaries_listed}};
}

json exact_json(const BigInt& v, const std::string& method) {
  return json{{"value", v.str()},
              {"log_value", json(log_of(v))},
              {"decimal", v.str()},
              {"rel_error_bound", 0.0},
              {"method", method},
              {"kp_status", kp_status_name(KPStatus::assumed)},
              {"certified", true}};
}

BipartiteGraph load(const RunConfig& c) {
  if (c.graph.empty()) throw InvalidArgument("--graph is required");
  return read_graph_file(c.graph);
}

json do_count(const RunConfig& c, const BipartiteGraph& g) {
  const std::string& mode = c.mode;
  if (mode == "oracle") {
    if (!c.lambda.empty()) {
      const Rational z = exact_hardcore(g, lambda_of(c), c.oracle_cap);
      json j = exact_json(1, "oracle-hardcore");
      j["value"] = to_string(z);
      j["log_value"] = json(log_of(z));
      j["decimal"] = decimal_from_log(log_of(z));
      return j;
    }
    const auto r = exact_count_bipartite(g, c.oracle_cap);
    json j = exact_json(r.value, "oracle");
    j["fingerprint"] = r.fingerprint;
    return j;
  }
  if (mode == "oracle-general") {
    const auto r = exact_count_general(SimpleGraph::from_bipartite(g), c.oracle_cap + 10);
    return exact_json(r.value, "oracle-general");
  }
  ExpanderOptions eo;
  eo.allow_brute = c.allow_brute;
  eo.verify_kp = c.verify_kp;
  eo.brute_cap = c.oracle_cap;
  eo.max_polymers = c.max_polymers;
  if (mode == "expander") return approx_json(count_expander(g, c.epsilon, params_of(c), eo));
  if (mode == "hardcore") {
    const auto hp = hardcore_of(c);
    json j = approx_json(count_hardcore_expander(g, hp, c.epsilon, eo));
    const int d = g.degree();
    j["beta"] = json(hp.beta(d));
    if (auto b = hp.beta_exact(d)) j["beta_exact"] = to_string(*b);
    j["container_condition"] = hp.container_condition(d);
    j["alpha_beta_condition"] = hp.alpha_beta_condition(d);
    const double c2 = hp.C2_value(d);
    j["C2"] = std::isfinite(c2) ? json(c2) : json("inf");
    return j;
  }
  if (mode == "general" || mode == "general-exact") {
    GeneralOptions go;
    go.exact = mode == "general-exact";
    go.verify_kp = c.verify_kp;
    go.max_polymers = c.max_polymers;
    go.exact_subset_cap = c.exact_cap;
    go.max_samples = c.max_samples;
    go.families.side = parse_side(c.side);
    const auto r = count_general(g, c.epsilon, c.delta, c.seed, params_of(c), go);
    json j = approx_json(r.count);
    j["census"] = census_json(r.census);
    j["L"] = r.L;
    j["large_degree"] = r.large_degree;
    j["eps_d"] = json(r.eps_d);
    j["delta_d"] = json(r.delta_d);
    j["distinct_sets"] = r.distinct_sets;
    j["d_samples"] = r.d_samples;
    j["restriction_checks"] = r.restriction_checks;
    return j;
  }
  throw InvalidArgument("unknown count mode '" + mode + "'");
}

SamplerMode sampler_mode_of(const std::string& s) {
  for (auto m : {SamplerMode::automatic, SamplerMode::exact, SamplerMode::self_reducible})
    if (s == sampler_mode_name(m)) return m;
  throw InvalidArgument("unknown sampler mode '" + s + "'");
}

json do_sample(const RunConfig& c, const BipartiteGraph& g) {
  if (c.samples < 1) throw InvalidArgument("--samples must be positive");
  SamplerOptions so;
  so.mode = sampler_mode_of(c.sampler_mode);
  so.exact_cap = static_cast<std::size_t>(c.exact_cap);
  so.max_polymers = c.max_polymers;
  const bool weighted = !c.lambda.empty();
  std::optional<ExpanderSampler> sampler;
  if (weighted) {
    const auto hp = hardcore_of(c);
    sampler.emplace(g, Membership::small, ExpansionParams{}, WeightModel::hardcore(hp.lambda), c.epsilon, so);
  } else {
    sampler.emplace(g, Membership::expanding, params_of(c), WeightModel::unweighted(), c.epsilon, so);
  }
  std::mt19937_64 rng(c.seed);
  json out = json::array();
  for (int i = 0; i < c.samples; ++i) out.push_back(bipartite_set_json(sampler->sample(rng)));
  return json{{"method", weighted ? "hardcore-sampler" : "expander-sampler"},
              {"sampler_mode", sampler_mode_name(sampler->mode())},
              {"ell", sampler->ell()},
              {"side_probability_x", json(sampler->side_probability(Side::X))},
              {"polymers_x", sampler->universe(Side::X).count()},
              {"polymers_y", sampler->universe(Side::Y).count()},
              {"samples", out}};
}

json do_verify_kp(const RunConfig& c, const BipartiteGraph& g) {
  const Side side = parse_side(c.side);
  const int n = g.balanced_n();
  const int d = g.degree();
  const bool weighted = !c.lambda.empty();
  const PolymerFamily fam = weighted ? PolymerFamily::small(side) : PolymerFamily::expanding(side, params_of(c));
  int ell = c.ell;
  if (ell <= 0) ell = d >= 2 ? choose_ell(n, d, c.epsilon, weighted) : 1;
  ell = std::min(ell, n);
  const auto u = enumerate_polymers(g, fam, ell, nullptr, c.max_polymers);
  KPFunctions kp = KPFunctions::unweighted(d);
  WeightModel m = WeightModel::unweighted();
  if (weighted) {
    const auto hp = hardcore_of(c);
    kp = KPFunctions::weighted(hp.c5, to_double(hp.alpha), hp.beta(d));
    m = WeightModel::hardcore(hp.lambda);
  }
  const auto rep = verify_kp(g, u, m, kp);
  double worst = 0.0;
  json failing = json::array();
  for (const auto& e : rep.entries) {
    if (e.f > 0) worst = std::max(worst, e.lhs / e.f);
    if (!e.pass && failing.size() < 20) failing.push_back(set_json(u.polymers[static_cast<std::size_t>(e.polymer)].vertices.bits));
  }
  const KPStatus status = rep.all_pass ? KPStatus::verified_to_cap : KPStatus::violated;
  return json{{"method", "verify-kp"},
              {"kp_status", kp_status_name(status)},
              {"size_cap", rep.size_cap},
              {"partial", rep.partial},
              {"polymers", u.count()},
              {"worst_ratio", json(worst)},
              {"failing_polymers", failing}};
}

json do_certify(const RunConfig& c, const BipartiteGraph& g) {
  const auto sg = SimpleGraph::from_bipartite(g);
  const auto r = count_via_certificates(sg, c.T, {}, {}, c.max_certificates);
  const auto truth = exact_count_bipartite(g, c.oracle_cap).value;
  const int n_total = g.nX() + g.nY();
  return json{{"method", "certificates"},
              {"T", c.T},
              {"below_T", r.below_T.str()},
              {"at_least_T", r.at_least_T.str()},
              {"value", r.total().str()},
              {"oracle", truth.str()},
              {"identity", r.total() == truth},
              {"certificates", r.certificates},
              {"max_region", r.max_region},
              {"region_bound", g.degree() >= 2 ? json(region_bound(n_total, g.degree())) : json(nullptr)},
              {"region_histogram", r.region_histogram}};
}

json do_check_expander(const RunConfig& c, const BipartiteGraph& g) {
  ExpanderCheckMode mode;
  if (c.check_mode == "exhaustive")
    mode = ExpanderCheckMode::exhaustive;
  else if (c.check_mode == "heuristic")
    mode = ExpanderCheckMode::heuristic;
  else
    throw InvalidArgument("unknown check mode '" + c.check_mode + "'");
  ExpanderCheckOptions opts;
  opts.seed = c.seed;
  const auto v = check_alpha_expander(g, to_double(parse_rational(c.alpha)), mode, opts);
  const char* kind = v.kind == ExpanderVerdictKind::verified    ? "verified"
                     : v.kind == ExpanderVerdictKind::falsified ? "falsified"
                                                                : "unknown";
  json j{{"method", "check-expander"}, {"verdict", kind}, {"sets_checked", v.sets_checked}};
  if (v.witness) j["witness"] = json{{"side", side_name(v.witness->side)}, {"set", set_json(v.witness->bits)}};
  return j;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

json do_bench(const RunConfig& c, std::ostream* csv) {
  struct Row {
    int size;
    std::string mode;
    std::string line;
  };
  std::vector<Row> rows;
  const auto sizes = c.sizes.empty() ? std::vector<int>{c.kind == "hypercube" ? c.d : c.kind == "cycle" ? c.m : c.n}
                                     : c.sizes;
  for (int s : sizes)
    for (const auto& m : split(c.modes)) rows.push_back({s, m, {}});

  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr failure;
  auto work = [&] {
    for (std::size_t i; (i = next++) < rows.size();) {
      Row& row = rows[i];
      std::ostringstream line;
      try {
        const auto g = generate(instance_of(c, row.size));
        RunConfig rc = c;
        rc.mode = row.mode;
        const auto t0 = std::chrono::steady_clock::now();
        const json r = do_count(rc, g);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const double truth = log_of(exact_count_bipartite(g, c.oracle_cap).value);
        const double lv = r["log_value"].get<double>();
        line << c.kind << ',' << row.size << ',' << g.nX() << ',' << g.degree() << ',' << row.mode << ','
             << lv << ',' << truth << ',' << std::expm1(lv - truth) << ','
             << (r["rel_error_bound"].is_number() ? r["rel_error_bound"].get<double>() : INFINITY) << ','
             << (r["certified"].get<bool>() ? 1 : 0) << ',' << secs;
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!failure) failure = std::current_exception();
      }
      row.line = line.str();
    }
  };
  const int workers = c.workers > 0 ? c.workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (int w = 0; w < std::min<int>(workers, static_cast<int>(rows.size())); ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  if (csv) {
    *csv << "kind,size,n,d,mode,log_value,log_exact,rel_error,rel_error_bound,certified,seconds\n";
    for (const auto& r : rows) *csv << r.line << '\n';
  }
  return json{{"method", "bench"}, {"rows", rows.size()}};
}

}  // namespace

json to_json(const RunConfig& c) {
  return json{{"subcommand", c.subcommand},
              {"graph", c.graph},
              {"mode", c.mode},
              {"epsilon", c.epsilon},
              {"delta", c.delta},
              {"lambda", c.lambda},
              {"float_lambda", c.float_lambda},
              {"seed", c.seed},
              {"C1", c.C1},
              {"alpha", c.alpha},
              {"c4", c.c4},
              {"c5", c.c5},
              {"side", c.side},
              {"ell", c.ell},
              {"T", c.T},
              {"samples", c.samples},
              {"sampler_mode", c.sampler_mode},
              {"check_mode", c.check_mode},
              {"allow_brute", c.allow_brute},
              {"verify_kp", c.verify_kp},
              {"caps",
               {{"oracle", c.oracle_cap},
                {"max_polymers", c.max_polymers},
                {"exact", c.exact_cap},
                {"max_samples", c.max_samples},
                {"max_certificates", c.max_certificates}}},
              {"kind", c.kind},
              {"m", c.m},
              {"d", c.d},
              {"n", c.n},
              {"dims", c.dims},
              {"sizes", c.sizes},
              {"modes", c.modes},
              {"workers", c.workers},
              {"output", c.output}};
}

RunConfig from_json(const json& j) {
  RunConfig c;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  get("subcommand", c.subcommand);
  get("graph", c.graph);
  get("mode", c.mode);
  get("epsilon", c.epsilon);
  get("delta", c.delta);
  get("lambda", c.lambda);
  get("float_lambda", c.float_lambda);
  get("seed", c.seed);
  get("C1", c.C1);
  get("alpha", c.alpha);
  get("c4", c.c4);
  get("c5", c.c5);
  get("side", c.side);
  get("ell", c.ell);
  get("T", c.T);
  get("samples", c.samples);
  get("sampler_mode", c.sampler_mode);
  get("check_mode", c.check_mode);
  get("allow_brute", c.allow_brute);
  get("verify_kp", c.verify_kp);
  if (j.contains("caps")) {
    const auto& k = j.at("caps");
    if (k.contains("oracle")) k.at("oracle").get_to(c.oracle_cap);
    if (k.contains("max_polymers")) k.at("max_polymers").get_to(c.max_polymers);
    if (k.contains("exact")) k.at("exact").get_to(c.exact_cap);
    if (k.contains("max_samples")) k.at("max_samples").get_to(c.max_samples);
    if (k.contains("max_certificates")) k.at("max_certificates").get_to(c.max_certificates);
  }
  get("kind", c.kind);
  get("m", c.m);
  get("d", c.d);
  get("n", c.n);
  get("dims", c.dims);
  get("sizes", c.sizes);
  get("modes", c.modes);
  get("workers", c.workers);
  get("output", c.output);
  return c;
}

json execute(const RunConfig& c, std::ostream* csv) {
  const auto t0 = std::chrono::steady_clock::now();
  json result;
  if (c.subcommand == "gen") {
    const auto spec = instance_of(c);
    const auto g = generate(spec);
    std::ostringstream text;
    write_graph(text, g, spec.describe());
    result = json{{"method", "gen"},
                  {"instance", spec.describe()},
                  {"nX", g.nX()},
                  {"nY", g.nY()},
                  {"d", g.degree()},
                  {"fingerprint", fingerprint(g)},
                  {"graph_text", text.str()}};
  } else if (c.subcommand == "bench") {
    result = do_bench(c, csv);
  } else {
    const auto g = load(c);
    if (c.subcommand == "count")
      result = do_count(c, g);
    else if (c.subcommand == "sample")
      result = do_sample(c, g);
    else if (c.subcommand == "verify-kp")
      result = do_verify_kp(c, g);
    else if (c.subcommand == "certify")
      result = do_certify(c, g);
    else if (c.subcommand == "check-expander")
      result = do_check_expander(c, g);
    else
      throw InvalidArgument("unknown subcommand '" + c.subcommand + "'");
    result["fingerprint"] = fingerprint(g);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json out{{"schema", kSchema}, {"config", to_json(c)}, {"seed", c.seed}, {"timing", {{"seconds", secs}}}};
  out["result"] = std::move(result);
  return out;
}

namespace {

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--graph", c.graph, "graph file");
  sub->add_option("--eps", c.epsilon, "relative accuracy")->capture_default_str();
  sub->add_option("--delta", c.delta, "failure probability")->capture_default_str();
  sub->add_option("--lambda", c.lambda, "fugacity p/q (hard-core model)");
  sub->add_flag("--float-lambda", c.float_lambda, "accept a floating-point --lambda");
  sub->add_option("--seed", c.seed)->capture_default_str();
  sub->add_option("--C1", c.C1)->capture_default_str();
  sub->add_option("--alpha", c.alpha)->capture_default_str();
  sub->add_option("--c4", c.c4)->capture_default_str();
  sub->add_option("--c5", c.c5)->capture_default_str();
  sub->add_option("--side", c.side)->capture_default_str();
  sub->add_option("--oracle-cap", c.oracle_cap)->capture_default_str();
  sub->add_option("--max-polymers", c.max_polymers)->capture_default_str();
  sub->add_option("--exact-cap", c.exact_cap)->capture_default_str();
  sub->add_option("--max-samples", c.max_samples)->capture_default_str();
  sub->add_option("--workers", c.workers, "0 = available parallelism")->capture_default_str();
  sub->add_option("-o,--out", c.output, "write the result here instead of stdout");
}

void add_instance(CLI::App* sub, RunConfig& c) {
  sub->add_option("--kind", c.kind, "hypercube, cycle, complete, random, torus, crown")->capture_default_str();
  sub->add_option("--m", c.m, "cycle length")->capture_default_str();
  sub->add_option("--d", c.d, "degree")->capture_default_str();
  sub->add_option("--n", c.n, "side size (random, crown)")->capture_default_str();
  sub->add_option("--dims", c.dims, "torus dimensions")->delimiter(',');
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  std::string replay;
  std::string replay_out;
  CLI::App app{"Approximate counting and sampling of independent sets in bipartite expanders"};
  app.add_option("--config", replay, "replay the config of an earlier result JSON");
  app.add_option("--replay-out", replay_out, "with --config: where to write the replayed result");
  app.require_subcommand(0, 1);

  auto* gen = app.add_subcommand("gen", "generate an instance in the graph text format");
  add_instance(gen, c);
  gen->add_option("--seed", c.seed)->capture_default_str();
  gen->add_option("-o,--out", c.output, "graph file to write");

  auto* count = app.add_subcommand("count", "count independent sets or the hard-core partition function");
  add_common(count, c);
  count->add_option("--mode", c.mode, "oracle, oracle-general, expander, hardcore, general, general-exact")
      ->default_val("oracle");
  count->add_flag("!--no-brute", c.allow_brute, "never take the exact branch for tiny eps");
  count->add_flag("--verify-kp", c.verify_kp, "check the convergence condition on the universe");

  auto* sample = app.add_subcommand("sample", "sample independent sets");
  add_common(sample, c);
  sample->add_option("--samples", c.samples)->capture_default_str();
  sample->add_option("--sampler-mode", c.sampler_mode, "automatic, exact, self-reducible")->capture_default_str();

  auto* kp = app.add_subcommand("verify-kp", "check the convergence condition on a polymer universe");
  add_common(kp, c);
  kp->add_option("--ell", c.ell, "polymer size cap; 0 picks the truncation level")->capture_default_str();

  auto* cert = app.add_subcommand("certify", "count through certificates and compare with the oracle");
  add_common(cert, c);
  cert->add_option("--T", c.T)->capture_default_str();
  cert->add_option("--max-certificates", c.max_certificates)->capture_default_str();

  auto* chk = app.add_subcommand("check-expander", "check vertex expansion |N(A)| >= (1+alpha)|A|");
  add_common(chk, c);
  chk->add_option("--check-mode", c.check_mode, "exhaustive or heuristic")->capture_default_str();

  auto* bench = app.add_subcommand("bench", "CSV of counts against the oracle over a size sweep");
  add_common(bench, c);
  add_instance(bench, c);
  bench->add_option("--sizes", c.sizes, "size parameter per row")->delimiter(',');
  bench->add_option("--modes", c.modes)->capture_default_str();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (!replay.empty()) {
      std::ifstream in(replay);
      if (!in) throw InvalidArgument("cannot open " + replay);
      json doc;
      try {
        doc = json::parse(in);
      } catch (const json::exception& e) {
        throw InvalidArgument(std::string("config: ") + e.what());
      }
      c = from_json(doc.contains("config") ? doc.at("config") : doc);
      c.output = replay_out;
    } else if (auto subs = app.get_subcommands(); !subs.empty()) {
      c.subcommand = subs.front()->get_name();
      if (c.subcommand != "count") c.mode.clear();
    } else {
      out << app.help();
      return 2;
    }
    if (c.subcommand == "count" && c.mode.empty()) c.mode = "oracle";
    if (c.workers <= 0) c.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    std::ostringstream csv;
    json result = execute(c, c.subcommand == "bench" ? &csv : nullptr);

    std::ofstream file;
    std::ostream* sink = &out;
    // gen writes the graph file itself; JSON still goes to stdout.
    if (!c.output.empty() && c.subcommand != "gen") {
      file.open(c.output);
      if (!file) throw InvalidArgument("cannot write " + c.output);
      sink = &file;
    }
    if (c.subcommand == "gen" && !c.output.empty()) {
      std::ofstream g(c.output);
      if (!g) throw InvalidArgument("cannot write " + c.output);
      g << result["result"]["graph_text"].get<std::string>();
      result["result"].erase("graph_text");
    }
    if (c.subcommand == "bench") {
      *sink << csv.str();
      if (sink != &out) out << result.dump(2) << '\n';
    } else {
      *sink << result.dump(2) << '\n';
    }
    return 0;
  } catch (const CapacityError& e) {
    err << "capacity: " << e.what() << '\n';
    return 3;
  } catch (const InvalidArgument& e) {
    err << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 4;
  }
}

}  // namespace bisc::cli
