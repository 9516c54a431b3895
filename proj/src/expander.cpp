#include "bisc/expander.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "bisc/errors.hpp"

namespace bisc {

namespace {

void check_instance(const BipartiteGraph& g, double eps) {
  if (!g.balanced()) throw InvalidArgument("expander algorithms need equal sides");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidArgument("epsilon must be positive");
}

KPStatus worse(KPStatus a, KPStatus b) {
  if (a == KPStatus::violated || b == KPStatus::violated) return KPStatus::violated;
  if (a == KPStatus::assumed || b == KPStatus::assumed) return KPStatus::assumed;
  return KPStatus::verified_to_cap;
}

// Truncation bound for one side; zero when the family has no members at all.
double side_bound(const BipartiteGraph& g, const PolymerFamily& fam, const LogPartitionEstimate& est, bool weighted) {
  if (fam.trivially_empty(g)) return 0.0;
  return certified_bound(g.balanced_n(), g.degree(), est.ell_used, weighted);
}

double combined_bound(double bx, double by, double eps0) {
  const double r = std::expm1(std::max(bx, by));
  if (eps0 >= 1.0) return std::numeric_limits<double>::infinity();
  return (1.0 + r) / (1.0 - eps0) - 1.0;
}

}  // namespace

double expander_eps0(int n, int d) { return std::exp2(-n * log2sq_over_d(d) / 60.0); }

ApproxCount count_expander(const BipartiteGraph& g, double eps, const ExpansionParams& p, const ExpanderOptions& opts) {
  check_instance(g, eps);
  p.validate();
  const int n = g.balanced_n();
  const int d = g.degree();
  ApproxCount out;
  out.eps0 = expander_eps0(n, d);
  if (opts.allow_brute && eps <= 2.0 * out.eps0) {
    const ExactCount c = exact_count_bipartite(g, opts.brute_cap);
    out.method = "brute";
    out.exact = c.value;
    out.log_value = log_of(c.value);
    out.rel_error_bound = eps;
    out.certified = true;
    return out;
  }
  const int ell = choose_ell(n, d, eps / 4.0);
  const WeightModel m = WeightModel::unweighted();
  TruncationOptions t;
  t.clusters = opts.clusters;
  t.max_polymers = opts.max_polymers;
  if (opts.verify_kp) t.kp = KPFunctions::unweighted(d);
  const auto fx = PolymerFamily::expanding(Side::X, p);
  const auto fy = PolymerFamily::expanding(Side::Y, p);
  const auto ex = truncated_log_xi(g, fx, m, ell, t);
  const auto ey = truncated_log_xi(g, fy, m, ell, t);
  out.method = "expander-CE";
  out.ell = ell;
  out.log_xi_x = ex.log_value;
  out.log_xi_y = ey.log_value;
  out.log_value = n * std::log(2.0) + log_add(ex.log_value, ey.log_value);
  out.kp_status = worse(ex.kp_status, ey.kp_status);
  out.rel_error_bound = combined_bound(side_bound(g, fx, ex, false), side_bound(g, fy, ey, false), out.eps0);
  out.certified = out.eps0 < 0.25 && out.kp_status != KPStatus::violated && out.rel_error_bound < 1.0;
  if (out.eps0 >= 0.25) out.notes.emplace_back("uncertified (small-n regime): eps0 >= 1/4");
  if (out.kp_status == KPStatus::violated) out.notes.emplace_back("KP condition fails on the enumerated polymers");
  return out;
}

// ---------------------------------------------------------------------------
// Hard-core parameters

void HardCoreParams::validate() const {
  if (lambda <= 0) throw InvalidArgument("lambda must be positive");
  if (alpha <= 0 || alpha > 1) throw InvalidArgument("alpha must lie in (0, 1]");
  if (!(c4 > 0) || !(c5 > 0)) throw InvalidArgument("c4 and c5 must be positive");
  if (C2 && !(*C2 > 0)) throw InvalidArgument("C2 must be positive");
}

namespace {

double beta_of(double lambda, double alpha, int d) {
  const double l = std::log2(1.0 + lambda);
  return l * l / (l + std::log2(2.0 * std::pow(static_cast<double>(d), 5) / alpha));
}

}  // namespace

double HardCoreParams::beta(int d) const { return beta_of(to_double(lambda), to_double(alpha), d); }

std::optional<Rational> HardCoreParams::beta_exact(int d) const {
  const auto l1 = exact_log2(1 + lambda);
  const auto l2 = exact_log2(Rational(2) * pow(Rational(d), 5) / alpha);
  if (!l1 || !l2 || *l1 + *l2 == 0) return std::nullopt;
  return (*l1 * *l1) / (*l1 + *l2);
}

bool HardCoreParams::container_condition(int d) const {
  const double a = to_double(alpha);
  const double ld = std::log2(static_cast<double>(d));
  const double first = std::log2(std::pow(static_cast<double>(d), 5) / a) / std::sqrt(static_cast<double>(d));
  const double second = 2.0 * ld * ld / (a * d);
  return beta(d) >= c4 * std::max(first, second);
}

bool HardCoreParams::alpha_beta_condition(int d) const {
  return to_double(alpha) * beta(d) >= 4000.0 / c5 * log2sq_over_d(d);
}

double HardCoreParams::C2_value(int d) const {
  if (C2) return *C2;
  if (d < 2) return std::numeric_limits<double>::infinity();
  const double a = to_double(alpha);
  const double need = 4000.0 / c5 * log2sq_over_d(d);
  auto ok = [&](double lam) { return a * beta_of(lam, a, d) >= need; };
  double hi = 1.0;
  while (!ok(hi)) {
    hi *= 2.0;
    if (hi > 1e300) return std::numeric_limits<double>::infinity();
  }
  double lo = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return hi * std::pow(static_cast<double>(d), 0.25) / std::log2(static_cast<double>(d));
}

bool HardCoreParams::lambda_condition(int d) const {
  if (d < 2) return false;
  return to_double(lambda) >= C2_value(d) * std::log2(static_cast<double>(d)) / std::pow(static_cast<double>(d), 0.25);
}

ApproxCount count_hardcore_expander(const BipartiteGraph& g, const HardCoreParams& hp, double eps,
                                    const ExpanderOptions& opts) {
  check_instance(g, eps);
  hp.validate();
  const int n = g.balanced_n();
  const int d = g.degree();
  const int ell = choose_ell(n, d, eps / 4.0, true);
  const WeightModel m = WeightModel::hardcore(hp.lambda);
  TruncationOptions t;
  t.clusters = opts.clusters;
  t.max_polymers = opts.max_polymers;
  if (opts.verify_kp) t.kp = KPFunctions::weighted(hp.c5, to_double(hp.alpha), hp.beta(d));
  const auto fx = PolymerFamily::small(Side::X);
  const auto fy = PolymerFamily::small(Side::Y);
  const auto ex = truncated_log_xi(g, fx, m, ell, t);
  const auto ey = truncated_log_xi(g, fy, m, ell, t);
  ApproxCount out;
  out.method = "expander-CE";
  out.ell = ell;
  out.log_xi_x = ex.log_value;
  out.log_xi_y = ey.log_value;
  out.log_value = n * std::log1p(to_double(hp.lambda)) + log_add(ex.log_value, ey.log_value);
  out.kp_status = worse(ex.kp_status, ey.kp_status);
  out.rel_error_bound = combined_bound(side_bound(g, fx, ex, true), side_bound(g, fy, ey, true), 0.0);
  const bool flags = hp.container_condition(d) && hp.alpha_beta_condition(d);
  out.certified = flags && out.kp_status != KPStatus::violated && out.rel_error_bound < 1.0;
  if (!flags) out.notes.emplace_back("uncertified: beta conditions fail for the configured constants");
  out.notes.emplace_back("bound covers truncation only; the two-side mixture error exp(-Omega(n)) is not quantified");
  if (hp.lambda == 1) out.notes.emplace_back("small-polymer family; count_expander uses the expanding family");
  return out;
}

// ---------------------------------------------------------------------------
// Sampler

const char* sampler_mode_name(SamplerMode m) {
  switch (m) {
    case SamplerMode::automatic:
      return "automatic";
    case SamplerMode::exact:
      return "exact";
    case SamplerMode::self_reducible:
      return "self-reducible";
  }
  return "?";
}

ExpanderSampler::ExpanderSampler(const BipartiteGraph& g, Membership membership, const ExpansionParams& p,
                                 const WeightModel& m, double eps, const SamplerOptions& opts)
    : g_(g), m_(m), mode_(opts.mode) {
  check_instance(g, eps);
  p.validate();
  const int n = g.balanced_n();
  const bool weighted = membership == Membership::small;
  if (g.degree() >= 2) ell_ = choose_ell(n, g.degree(), eps / 8.0, weighted);
  auto family = [&](Side s) {
    return membership == Membership::expanding ? PolymerFamily::expanding(s, p) : PolymerFamily::small(s);
  };

  if (mode_ != SamplerMode::self_reducible) {
    try {
      x_.universe = enumerate_polymers(g, family(Side::X), n, nullptr, opts.exact_cap + 1);
      y_.universe = enumerate_polymers(g, family(Side::Y), n, nullptr, opts.exact_cap + 1);
      if (x_.universe.count() > opts.exact_cap || y_.universe.count() > opts.exact_cap)
        throw CapacityError("exact sampling limited to " + std::to_string(opts.exact_cap) + " polymers per side");
      mode_ = SamplerMode::exact;
    } catch (const CapacityError&) {
      if (mode_ == SamplerMode::exact) throw;
      mode_ = SamplerMode::self_reducible;
    }
  }
  if (mode_ == SamplerMode::self_reducible) {
    if (g.degree() < 2) throw InvalidArgument("self-reducible sampling needs d >= 2");
    x_.universe = enumerate_polymers(g, family(Side::X), ell_, nullptr, opts.max_polymers);
    y_.universe = enumerate_polymers(g, family(Side::Y), ell_, nullptr, opts.max_polymers);
    for (SideModel* sm : {&x_, &y_}) {
      sm->table.emplace(g, sm->universe, m_, ell_, opts.clusters);
      build_self_reducible(*sm);
    }
  } else {
    build_exact(x_);
    build_exact(y_);
  }
  px_ = 1.0 / (1.0 + std::exp(y_.log_xi - x_.log_xi));
  if (x_.exact_xi && y_.exact_xi) {
    exact_px_ = *x_.exact_xi / (*x_.exact_xi + *y_.exact_xi);
    px_ = to_double(*exact_px_);
  }
}

void ExpanderSampler::build_exact(SideModel& sm) const {
  const int d = g_.degree();
  std::vector<double> logw(sm.universe.count());
  std::vector<std::optional<Rational>> w(sm.universe.count());
  bool exact = true;
  for (std::size_t i = 0; i < sm.universe.count(); ++i) {
    logw[i] = m_.log_weight(sm.universe.polymers[i], d);
    w[i] = m_.exact_weight(sm.universe.polymers[i], d);
    exact = exact && w[i].has_value();
  }
  KahanSum total;
  Rational exact_total = 0;
  for_each_configuration(sm.universe, [&](const std::vector<int>& ids) {
    double lw = 0.0;
    Rational ew = 1;
    for (int i : ids) {
      lw += logw[static_cast<std::size_t>(i)];
      if (exact) ew *= *w[static_cast<std::size_t>(i)];
    }
    total.add(std::exp(lw));
    if (exact) exact_total += ew;
    sm.configs.push_back(ids);
    sm.config_cumulative.push_back(total.value());
  });
  sm.log_xi = std::log(total.value());
  if (exact) {
    sm.exact_xi = exact_total;
    sm.log_xi = log_of(exact_total);
  }
}

void ExpanderSampler::build_self_reducible(SideModel& sm) const {
  const auto n = static_cast<std::size_t>(g_.balanced_n());
  sm.containing.assign(n, {});
  for (std::size_t i = 0; i < sm.universe.count(); ++i)
    sm.containing[sm.universe.polymers[i].vertices.bits.first()].push_back(static_cast<int>(i));
  sm.log_xi = sm.table->log_xi();
}

std::vector<std::pair<int, double>> ExpanderSampler::step_weights(const SideModel& sm, const BitSet& open,
                                                                  int v) const {
  const int d = g_.degree();
  std::vector<std::pair<int, double>> out;  // (polymer id or -1, log odds)
  BitSet rest = open;
  rest.reset(static_cast<std::size_t>(v));
  out.emplace_back(-1, sm.table->log_xi_within(rest));
  for (int id : sm.containing[static_cast<std::size_t>(v)]) {
    const Polymer& poly = sm.universe.polymers[static_cast<std::size_t>(id)];
    if (!poly.vertices.bits.subset_of(open)) continue;
    const BitSet after = open - neighborhood(g_, poly.boundary).bits;
    out.emplace_back(id, m_.log_weight(poly, d) + sm.table->log_xi_within(after));
  }
  double top = -INFINITY;
  for (const auto& [id, lw] : out) top = std::max(top, lw);
  double sum = 0.0;
  for (auto& [id, lw] : out) sum += (lw = std::exp(lw - top));
  for (auto& [id, p] : out) p /= sum;
  return out;
}

std::vector<int> ExpanderSampler::sample_configuration(const SideModel& sm, std::mt19937_64& rng) const {
  if (mode_ == SamplerMode::exact) {
    const double u = uniform01(rng) * sm.config_cumulative.back();
    auto it = std::upper_bound(sm.config_cumulative.begin(), sm.config_cumulative.end(), u);
    if (it == sm.config_cumulative.end()) --it;
    return sm.configs[static_cast<std::size_t>(it - sm.config_cumulative.begin())];
  }
  std::vector<int> chosen;
  BitSet open = BitSet::full(static_cast<std::size_t>(g_.balanced_n()));
  for (std::size_t v = open.first(); v != BitSet::npos; v = open.next(v)) {
    const auto options = step_weights(sm, open, static_cast<int>(v));
    double u = uniform01(rng);
    std::size_t pick = options.size() - 1;
    for (std::size_t i = 0; i < options.size(); ++i) {
      if (u < options[i].second) {
        pick = i;
        break;
      }
      u -= options[i].second;
    }
    const int id = options[pick].first;
    if (id < 0) {
      open.reset(v);
    } else {
      chosen.push_back(id);
      open -= neighborhood(g_, sm.universe.polymers[static_cast<std::size_t>(id)].boundary).bits;
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

BipartiteSet ExpanderSampler::sample(std::mt19937_64& rng) const {
  const Side s = uniform01(rng) < px_ ? Side::X : Side::Y;
  const SideModel& sm = side(s);
  const auto ids = sample_configuration(sm, rng);
  SideSet on = g_.empty_set(s);
  SideSet blocked = g_.empty_set(opposite(s));
  for (int id : ids) {
    const Polymer& poly = sm.universe.polymers[static_cast<std::size_t>(id)];
    on.bits |= poly.vertices.bits;
    blocked.bits |= poly.boundary.bits;
  }
  SideSet fill = g_.empty_set(opposite(s));
  const double q = m_.fill_probability();
  for (int v = 0; v < g_.n(opposite(s)); ++v)
    if (!blocked.contains(static_cast<std::size_t>(v)) && uniform01(rng) < q) fill.bits.set(static_cast<std::size_t>(v));
  BipartiteSet out;
  out.x = s == Side::X ? on.bits : fill.bits;
  out.y = s == Side::X ? fill.bits : on.bits;
  return out;
}

std::vector<ConfigurationProbability> ExpanderSampler::configuration_distribution(Side s) const {
  const SideModel& sm = side(s);
  std::vector<ConfigurationProbability> out;
  auto emit = [&](const std::vector<int>& ids, double p) {
    ConfigurationProbability c;
    for (int id : ids) c.polymers.push_back(sm.universe.polymers[static_cast<std::size_t>(id)].vertices);
    c.probability = p;
    out.push_back(std::move(c));
  };
  if (mode_ == SamplerMode::exact) {
    double prev = 0.0;
    const double total = sm.config_cumulative.back();
    for (std::size_t i = 0; i < sm.configs.size(); ++i) {
      emit(sm.configs[i], (sm.config_cumulative[i] - prev) / total);
      prev = sm.config_cumulative[i];
    }
    return out;
  }
  std::vector<int> chosen;
  std::function<void(const BitSet&, double)> walk = [&](const BitSet& open, double p) {
    const std::size_t v = open.first();
    if (v == BitSet::npos) {
      auto ids = chosen;
      std::sort(ids.begin(), ids.end());
      emit(ids, p);
      return;
    }
    for (const auto& [id, q] : step_weights(sm, open, static_cast<int>(v))) {
      if (q == 0.0) continue;
      if (id < 0) {
        BitSet next = open;
        next.reset(v);
        walk(next, p * q);
      } else {
        chosen.push_back(id);
        walk(open - neighborhood(g_, sm.universe.polymers[static_cast<std::size_t>(id)].boundary).bits,
             p * q);
        chosen.pop_back();
      }
    }
  };
  walk(BitSet::full(static_cast<std::size_t>(g_.balanced_n())), 1.0);
  return out;
}

std::vector<DistributionEntry> ExpanderSampler::output_distribution(std::size_t max_entries) const {
  if (mode_ != SamplerMode::exact || !exact_px_) throw InvalidArgument("output distribution needs exact mode with rational weights");
  const auto q = m_.exact_fill_probability();
  if (!q) throw InvalidArgument("output distribution needs a rational fill probability");
  const int d = g_.degree();
  std::map<BipartiteSet, Rational> acc;
  for (Side s : {Side::X, Side::Y}) {
    const SideModel& sm = side(s);
    const Rational ps = s == Side::X ? *exact_px_ : 1 - *exact_px_;
    for (const auto& ids : sm.configs) {
      Rational w = 1;
      BitSet on(static_cast<std::size_t>(g_.n(s)));
      BitSet blocked(static_cast<std::size_t>(g_.n(opposite(s))));
      for (int id : ids) {
        const Polymer& poly = sm.universe.polymers[static_cast<std::size_t>(id)];
        w *= *m_.exact_weight(poly, d);
        on |= poly.vertices.bits;
        blocked |= poly.boundary.bits;
      }
      const Rational base = ps * w / *sm.exact_xi;
      const auto free = blocked.complement().members();
      if (free.size() > 40) throw CapacityError("too many free vertices for an exact output distribution");
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free.size()); ++mask) {
        BitSet fill(blocked.universe());
        for (std::size_t i = 0; i < free.size(); ++i)
          if ((mask >> i) & 1U) fill.set(static_cast<std::size_t>(free[i]));
        const auto k = static_cast<unsigned>(std::popcount(mask));
        const Rational p = base * pow(*q, k) * pow(1 - *q, static_cast<unsigned>(free.size()) - k);
        BipartiteSet set;
        set.x = s == Side::X ? on : fill;
        set.y = s == Side::X ? fill : on;
        acc[set] += p;
        if (acc.size() > max_entries) throw CapacityError("output distribution exceeds the entry cap");
      }
    }
  }
  std::vector<DistributionEntry> out;
  out.reserve(acc.size());
  for (auto& [set, p] : acc) out.push_back({set, p});
  return out;
}

BipartiteSet sample_expander(const BipartiteGraph& g, double eps, const ExpansionParams& p, std::uint64_t seed,
                             const SamplerOptions& opts) {
  const ExpanderSampler s(g, Membership::expanding, p, WeightModel::unweighted(), eps, opts);
  std::mt19937_64 rng(seed);
  return s.sample(rng);
}

BipartiteSet sample_hardcore_expander(const BipartiteGraph& g, const HardCoreParams& hp, double eps,
                                      std::uint64_t seed, const SamplerOptions& opts) {
  hp.validate();
  const ExpanderSampler s(g, Membership::small, ExpansionParams{}, WeightModel::hardcore(hp.lambda), eps, opts);
  std::mt19937_64 rng(seed);
  return s.sample(rng);
}

namespace {

template <class T, class Get>
T tv_impl(const std::vector<DistributionEntry>& a, const std::vector<DistributionEntry>& b, Get get) {
  std::map<BipartiteSet, T> diff;
  for (const auto& e : a) diff[e.set] += get(e);
  for (const auto& e : b) diff[e.set] -= get(e);
  T sum = 0;
  for (const auto& [set, v] : diff)
    if (v > 0) sum += v;
  return sum;
}

}  // namespace

double total_variation(const std::vector<DistributionEntry>& a, const std::vector<DistributionEntry>& b) {
  return tv_impl<double>(a, b, [](const DistributionEntry& e) { return to_double(e.probability); });
}

Rational total_variation_exact(const std::vector<DistributionEntry>& a, const std::vector<DistributionEntry>& b) {
  return tv_impl<Rational>(a, b, [](const DistributionEntry& e) { return e.probability; });
}

}  // namespace bisc
