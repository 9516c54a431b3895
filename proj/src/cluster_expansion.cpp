#include "bisc/cluster_expansion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bisc/errors.hpp"

namespace bisc {

int choose_ell(int n, int d, double eps, bool weighted) {
  if (d < 2) throw InvalidArgument("choose_ell needs d >= 2");
  if (n < 1) throw InvalidArgument("choose_ell needs n >= 1");
  if (!(eps > 0)) throw InvalidArgument("epsilon must be positive");
  const double l = std::log2(static_cast<double>(d));
  const double scale = static_cast<double>(d) / ((weighted ? 1000.0 : 2.0) * l * l);
  const double x = scale * std::log2(static_cast<double>(n) / eps);
  return std::max(1, static_cast<int>(std::ceil(x - 1e-9)));
}

double certified_bound(int n, int d, int ell, bool weighted) {
  const double rate = (weighted ? 500.0 : 2.0) * log2sq_over_d(d);
  return static_cast<double>(n) * std::exp2(-rate * ell);
}

const char* kp_status_name(KPStatus s) {
  switch (s) {
    case KPStatus::verified_to_cap:
      return "verified-to-cap";
    case KPStatus::assumed:
      return "assumed";
    case KPStatus::violated:
      return "violated";
  }
  return "?";
}

KPFunctions KPFunctions::unweighted(int d) {
  const double s = std::log(2.0) * log2sq_over_d(d);
  return {s, 2.0 * s};
}

KPFunctions KPFunctions::weighted(double c5, double alpha, double beta, bool tilde) {
  const double base = c5 * alpha * std::log(2.0) * beta;
  return {base / (tilde ? 16.0 : 8.0), base / 8.0};
}

KPReport verify_kp(const BipartiteGraph& g, const PolymerUniverse& u, const WeightModel& m, const KPFunctions& kp) {
  KPReport r;
  r.size_cap = u.size_cap;
  const int d = g.degree();
  std::vector<double> term(u.count());
  for (std::size_t i = 0; i < u.count(); ++i) {
    const Polymer& p = u.polymers[i];
    term[i] = std::exp(m.log_weight(p, d) + kp.f(p) + kp.g(p));
  }
  for (std::size_t i = 0; i < u.count(); ++i) {
    KahanSum s;
    s.add(term[i]);
    u.incompatible[i].for_each([&](std::size_t j) { s.add(term[j]); });
    KPEntry e{static_cast<int>(i), s.value(), kp.f(u.polymers[i]), false};
    e.pass = e.lhs <= e.f;
    r.all_pass = r.all_pass && e.pass;
    r.entries.push_back(e);
  }
  return r;
}

LogPartitionEstimate truncated_log_xi(const BipartiteGraph& g, const PolymerUniverse& u, const WeightModel& m, int ell,
                                      const TruncationOptions& opts) {
  LogPartitionEstimate est;
  est.ell_used = ell;
  est.polymers = u.count();
  est.certified_bound = certified_bound(g.n(u.family.side), g.degree(), std::max(ell, 1), opts.weighted_bound);
  if (opts.kp) {
    const KPReport rep = verify_kp(g, u, m, *opts.kp);
    est.kp_status = rep.all_pass ? KPStatus::verified_to_cap : KPStatus::violated;
  }
  std::vector<KahanSum> buckets(static_cast<std::size_t>(std::max(ell, 0) + 1));
  Rational exact = 0;
  ClusterOptions co = opts.clusters;
  co.exact = opts.exact;
  for_each_cluster(g, u, m, ell, co, [&](const ClusterTerm& t) {
    buckets[static_cast<std::size_t>(t.size)].add(t.term);
    if (opts.exact) exact += *t.exact_term;
    ++est.clusters;
    return true;
  });
  KahanSum total;
  est.by_size.resize(buckets.size());
  for (std::size_t k = 0; k < buckets.size(); ++k) {
    est.by_size[k] = buckets[k].value();
    total.add(est.by_size[k]);
  }
  est.log_value = total.value();
  if (opts.exact) est.exact_sum = std::move(exact);
  return est;
}

LogPartitionEstimate truncated_log_xi(const BipartiteGraph& g, const PolymerFamily& fam, const WeightModel& m, int ell,
                                      const TruncationOptions& opts) {
  const PolymerUniverse u = enumerate_polymers(g, fam, ell, nullptr, opts.max_polymers);
  return truncated_log_xi(g, u, m, ell, opts);
}

ClusterTable::ClusterTable(const BipartiteGraph& g, const PolymerUniverse& u, const WeightModel& m, int ell,
                           const ClusterOptions& opts)
    : ell_(ell) {
  struct Row {
    int size;
    BitSet support;
    double term;
  };
  std::vector<Row> rows;
  ClusterOptions co = opts;
  co.exact = false;
  for_each_cluster(g, u, m, ell, co, [&](const ClusterTerm& t) {
    rows.push_back({t.size, t.support, t.term});
    return true;
  });
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.size < b.size; });
  supports_.reserve(rows.size());
  terms_.reserve(rows.size());
  for (auto& r : rows) {
    supports_.push_back(std::move(r.support));
    terms_.push_back(r.term);
  }
}

double ClusterTable::log_xi_within(const BitSet& allowed) const {
  KahanSum s;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (supports_[i].subset_of(allowed)) s.add(terms_[i]);
  return s.value();
}

double ClusterTable::log_xi() const {
  KahanSum s;
  for (double t : terms_) s.add(t);
  return s.value();
}

void for_each_configuration(const PolymerUniverse& u, const std::function<void(const std::vector<int>&)>& visit) {
  const std::size_t n = u.count();
  std::vector<int> chosen;
  BitSet blocked(n);
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    visit(chosen);
    for (std::size_t i = from; i < n; ++i) {
      if (blocked.test(i)) continue;
      BitSet saved = blocked;
      blocked |= u.incompatible[i];
      chosen.push_back(static_cast<int>(i));
      rec(i + 1);
      chosen.pop_back();
      blocked = std::move(saved);
    }
  };
  rec(0);
}

ExactXi exact_xi(const BipartiteGraph& g, const PolymerUniverse& u, const WeightModel& m, std::size_t cap) {
  if (u.count() > cap)
    throw CapacityError("exact partition function limited to " + std::to_string(cap) + " polymers (universe has " +
                        std::to_string(u.count()) + ")");
  const int d = g.degree();
  std::vector<double> logw(u.count());
  std::vector<std::optional<Rational>> w(u.count());
  bool exact = true;
  for (std::size_t i = 0; i < u.count(); ++i) {
    logw[i] = m.log_weight(u.polymers[i], d);
    w[i] = m.exact_weight(u.polymers[i], d);
    exact = exact && w[i].has_value();
  }
  ExactXi out;
  const std::size_t max_size = static_cast<std::size_t>(g.n(u.family.side));
  std::vector<KahanSum> buckets(max_size + 1);
  if (exact) out.exact_by_size.assign(max_size + 1, Rational(0));
  for_each_configuration(u, [&](const std::vector<int>& ids) {
    ++out.configurations;
    std::size_t size = 0;
    double lw = 0.0;
    for (int i : ids) {
      size += static_cast<std::size_t>(u.polymers[static_cast<std::size_t>(i)].size());
      lw += logw[static_cast<std::size_t>(i)];
    }
    buckets[size].add(std::exp(lw));
    if (exact) {
      Rational p = 1;
      for (int i : ids) p *= *w[static_cast<std::size_t>(i)];
      out.exact_by_size[size] += p;
    }
  });
  out.by_size.resize(buckets.size());
  KahanSum total;
  for (std::size_t k = 0; k < buckets.size(); ++k) {
    out.by_size[k] = buckets[k].value();
    total.add(out.by_size[k]);
  }
  if (exact) {
    Rational v = 0;
    for (const auto& c : out.exact_by_size) v += c;
    out.log_value = log_of(v);
    out.value = std::move(v);
  } else {
    out.log_value = std::log(total.value());
  }
  return out;
}

ExactXi exact_xi(const BipartiteGraph& g, const PolymerFamily& fam, const WeightModel& m, std::size_t cap) {
  const PolymerUniverse u = enumerate_polymers(g, fam, g.n(fam.side), nullptr, cap + 1);
  return exact_xi(g, u, m, cap);
}

ExactXi exact_xi_subsets(const BipartiteGraph& g, const PolymerFamily& fam, const WeightModel& m,
                         const BitSet* allowed, int cap) {
  const int n = g.n(fam.side);
  const BitSet scope = allowed ? *allowed : BitSet::full(static_cast<std::size_t>(n));
  const std::vector<int> verts = scope.members();
  if (static_cast<int>(verts.size()) > cap)
    throw CapacityError("subset enumeration limited to " + std::to_string(cap) + " vertices");
  const int d = g.degree();
  ExactXi out;
  std::vector<KahanSum> buckets(static_cast<std::size_t>(n + 1));
  bool exact = m.exact_weight(1, d, d).has_value();
  if (exact) out.exact_by_size.assign(static_cast<std::size_t>(n + 1), Rational(0));
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << verts.size()); ++mask) {
    SideSet set = g.empty_set(fam.side);
    for (std::size_t i = 0; i < verts.size(); ++i)
      if ((mask >> i) & 1U) set.bits.set(static_cast<std::size_t>(verts[i]));
    double lw = 0.0;
    Rational ew = 1;
    bool ok = true;
    for (const auto& comp : two_linked_components(g, set)) {
      if (!fam.admits(g, comp)) {
        ok = false;
        break;
      }
      const Polymer p = make_polymer(g, comp);
      lw += m.log_weight(p, d);
      if (exact) {
        const auto w = m.exact_weight(p, d);
        if (w)
          ew *= *w;
        else
          exact = false;
      }
    }
    if (!ok) continue;
    ++out.configurations;
    buckets[set.size()].add(std::exp(lw));
    if (exact) out.exact_by_size[set.size()] += ew;
  }
  KahanSum total;
  for (const auto& b : buckets) {
    out.by_size.push_back(b.value());
    total.add(b.value());
  }
  out.log_value = std::log(total.value());
  if (exact) {
    Rational v = 0;
    for (const auto& x : out.exact_by_size) v += x;
    out.value = v;
    out.log_value = log_of(v);
  } else {
    out.exact_by_size.clear();
  }
  return out;
}

TailMass tail_mass(const BipartiteGraph& g, const PolymerFamily& fam, const WeightModel& m, double delta,
                   std::size_t cap) {
  if (delta < 0) throw InvalidArgument("delta must be nonnegative");
  const ExactXi xi = exact_xi(g, fam, m, cap);
  const int n = g.n(fam.side);
  const double threshold = delta * n;
  TailMass t;
  const int d = g.degree();
  t.bound = std::exp2(-delta * n * log2sq_over_d(d) / 2.0);
  KahanSum num;
  KahanSum den;
  Rational exact_num = 0;
  for (std::size_t k = 0; k < xi.by_size.size(); ++k) {
    den.add(xi.by_size[k]);
    if (static_cast<double>(k) >= threshold - 1e-9) {
      num.add(xi.by_size[k]);
      if (xi.value) exact_num += xi.exact_by_size[k];
    }
  }
  t.probability = num.value() / den.value();
  if (xi.value) {
    t.exact = exact_num / *xi.value;
    t.probability = to_double(*t.exact);
  }
  return t;
}

}  // namespace bisc
