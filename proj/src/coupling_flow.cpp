#include "rgqm/coupling_flow.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "rgqm/errors.hpp"
#include "rgqm/lpa_flow.hpp"
#include "rgqm/series.hpp"

namespace rgqm {

namespace {

std::vector<int> with(std::vector<int> base, std::initializer_list<int> extra) {
  base.insert(base.end(), extra);
  std::sort(base.begin(), base.end());
  return base;
}

// Denominator M w_m^2 + g^{m,-m}, checked against the log guard.
double loop_denominator(const CouplingTable& t, int m, const FlowParams& params) {
  const double mw2 = params.mass * omega_sq(m, params);
  const double g = t.get({-m, m});
  const double arg = 1.0 + g / mw2;
  if (!(arg > kLogGuard)) throw ConvexityError(m, 0.0, arg);
  return mw2 + g;
}

// All ways to split the index set into unordered pairs.
void pairings_rec(std::vector<int> rest, std::vector<std::pair<int, int>>& cur,
                  std::vector<std::vector<std::pair<int, int>>>& out) {
  if (rest.empty()) {
    out.push_back(cur);
    return;
  }
  const int a = rest.front();
  for (std::size_t j = 1; j < rest.size(); ++j) {
    std::vector<int> next;
    for (std::size_t k = 1; k < rest.size(); ++k)
      if (k != j) next.push_back(rest[k]);
    cur.push_back({a, rest[j]});
    pairings_rec(next, cur, out);
    cur.pop_back();
  }
}

const std::vector<std::vector<std::pair<int, int>>>& pairings_of(int n) {
  static const auto four = [] {
    std::vector<std::vector<std::pair<int, int>>> out;
    std::vector<std::pair<int, int>> cur;
    pairings_rec({0, 1, 2, 3}, cur, out);
    return out;
  }();
  static const auto six = [] {
    std::vector<std::vector<std::pair<int, int>>> out;
    std::vector<std::pair<int, int>> cur;
    pairings_rec({0, 1, 2, 3, 4, 5}, cur, out);
    return out;
  }();
  return n == 4 ? four : six;
}

}  // namespace

double CouplingTable::get(std::vector<int> momenta) const {
  std::sort(momenta.begin(), momenta.end());
  auto it = entries.find(momenta);
  return it == entries.end() ? 0.0 : it->second;
}

void CouplingTable::set(std::vector<int> momenta, double value) {
  std::sort(momenta.begin(), momenta.end());
  if (std::accumulate(momenta.begin(), momenta.end(), 0) != 0)
    throw std::invalid_argument("coupling tuple violates momentum conservation");
  if (static_cast<int>(momenta.size()) > max_order)
    throw std::invalid_argument("coupling tuple longer than the truncation order");
  for (int n : momenta)
    if (std::abs(n) > cutoff) throw std::invalid_argument("coupling tuple above the cutoff");
  entries[momenta] = value;
}

void CouplingTable::add(std::vector<int> momenta, double value) {
  set(momenta, get(momenta) + value);
}

CouplingTable CouplingTable::pruned_below(int m) const {
  CouplingTable t;
  t.max_order = max_order;
  t.cutoff = m - 1;
  for (const auto& [k, v] : entries) {
    const bool keep = std::all_of(k.begin(), k.end(), [&](int n) { return std::abs(n) < m; });
    if (keep) t.entries.emplace(k, v);
  }
  return t;
}

std::string CouplingTable::to_json() const {
  nlohmann::json j;
  j["cutoff"] = cutoff;
  j["max_order"] = max_order;
  j["entries"] = nlohmann::json::array();
  for (const auto& [k, v] : entries) j["entries"].push_back({{"momenta", k}, {"value", v}});
  return j.dump(2);
}

CouplingTable CouplingTable::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  CouplingTable t;
  t.cutoff = j.at("cutoff").get<int>();
  t.max_order = j.at("max_order").get<int>();
  for (const auto& e : j.at("entries"))
    t.set(e.at("momenta").get<std::vector<int>>(), e.at("value").get<double>());
  return t;
}

CouplingTable CouplingTable::from_taylor(const std::vector<double>& derivs, int cutoff,
                                         int max_order) {
  CouplingTable t;
  t.cutoff = cutoff;
  t.max_order = max_order;
  for (int p = 0; p <= max_order && p < static_cast<int>(derivs.size()); ++p) {
    if (derivs[p] == 0.0) continue;
    for (auto& tup : conserving_tuples(p, cutoff)) t.entries[tup] = derivs[p];
  }
  return t;
}

std::vector<std::vector<int>> conserving_tuples(int p, int cutoff) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int, int, int)> rec = [&](int left, int lo, int sum) {
    if (left == 0) {
      if (sum == 0) out.push_back(cur);
      return;
    }
    for (int v = lo; v <= cutoff; ++v) {
      // the remaining entries are all >= v
      if (sum + left * v > 0) break;
      if (sum + left * cutoff < 0) continue;
      cur.push_back(v);
      rec(left - 1, v, sum + v);
      cur.pop_back();
    }
  };
  rec(p, -cutoff, 0);
  return out;
}

void AnharmonicSpec::validate() const {
  if (!(mass > 0)) throw std::invalid_argument("anharmonic spec needs M > 0");
  if (!(omega >= 0)) throw std::invalid_argument("anharmonic spec needs Omega >= 0");
  if (!(lambda >= 0)) throw std::invalid_argument("anharmonic spec needs lambda >= 0");
}

std::vector<double> AnharmonicSpec::polynomial() const {
  if (lambda == 0.0) return {0.0, 0.0, 0.5 * mass * omega * omega};
  return {0.0, 0.0, 0.5 * mass * omega * omega, 0.0, lambda / 24.0};
}

std::vector<double> AnharmonicSpec::taylor(int order) const {
  std::vector<double> d(order + 1, 0.0);
  if (order >= 2) d[2] = mass * omega * omega;
  if (order >= 4) d[4] = lambda;
  return d;
}

std::vector<double> naive_lpa_tower_step(const std::vector<double>& g, int m,
                                         const FlowParams& params) {
  const int order = static_cast<int>(g.size()) - 1;
  const double mw2 = params.mass * omega_sq(m, params);
  // 1 + V''(x0 + t)/(M w^2) as a series in t
  Series s(order);
  double fact = 1.0;
  for (int k = 0; k + 2 <= order; ++k) {
    if (k > 0) fact *= k;
    s[k] = g[k + 2] / fact / mw2;
  }
  s[0] += 1.0;
  if (!(s[0] > kLogGuard)) throw ConvexityError(m, 0.0, s[0]);
  const std::vector<double> inc = (s.log() * (1.0 / params.beta)).derivatives();
  std::vector<double> out(g);
  for (int n = 0; n <= order; ++n) out[n] += inc[n];
  return out;
}

double flow_g0(const CouplingTable& t, int m, const FlowParams& params) {
  loop_denominator(t, m, params);  // convexity check
  return std::log1p(t.get({-m, m}) / (params.mass * omega_sq(m, params))) / params.beta;
}

double flow_g2(const CouplingTable& t, int p, int m, const FlowParams& params) {
  const double d = loop_denominator(t, m, params);
  return t.get({p, -p, m, -m}) / d / params.beta;
}

double flow_g4(const CouplingTable& t, const std::array<int, 4>& p, int m,
               const FlowParams& params) {
  const double d = loop_denominator(t, m, params);
  const std::vector<int> ext(p.begin(), p.end());
  double pairs = 0.0;
  for (const auto& pr : pairings_of(4)) {
    const auto& a = pr[0];
    const auto& b = pr[1];
    pairs += t.get({ext[a.first], ext[a.second], m, -m}) * t.get({ext[b.first], ext[b.second], m, -m});
  }
  return (t.get(with(ext, {m, -m})) / d - pairs / (d * d)) / params.beta;
}

double flow_g6(const CouplingTable& t, const std::array<int, 6>& p, int m,
               const FlowParams& params, const SexticWeights& w) {
  const double d = loop_denominator(t, m, params);
  const std::vector<int> ext(p.begin(), p.end());
  const double eight = t.get(with(ext, {m, -m}));

  double split = 0.0;  // 2 + 4
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) {
      std::vector<int> four;
      for (int k = 0; k < 6; ++k)
        if (k != i && k != j) four.push_back(ext[k]);
      split += t.get({ext[i], ext[j], m, -m}) * t.get(with(four, {m, -m}));
    }

  double cubic = 0.0;
  for (const auto& pr : pairings_of(6)) {
    double prod = 1.0;
    for (const auto& [a, b] : pr) prod *= t.get({ext[a], ext[b], m, -m});
    cubic += prod;
  }

  double tree = 0.0;  // ordered 3 + 3 splits, S carries +m
  for (int mask = 0; mask < 64; ++mask) {
    if (__builtin_popcount(mask) != 3) continue;
    std::vector<int> s, c;
    for (int k = 0; k < 6; ++k) (mask >> k & 1 ? s : c).push_back(ext[k]);
    tree += t.get(with(s, {m})) * t.get(with(c, {-m}));
  }

  const double loop = eight / d - split / (d * d) + w.cubic_loop * cubic / (d * d * d);
  return loop / params.beta - w.tree * tree / d;
}

CouplingTable display_table_step(const CouplingTable& t, int m, const FlowParams& params,
                                 const SexticWeights& w) {
  CouplingTable out = t.pruned_below(m);
  const int top = std::min(out.max_order, 6);
  const double g0 = flow_g0(t, m, params);
  out.add({}, g0);
  for (int p = 1; p <= m - 1 && top >= 2; ++p) out.add({-p, p}, flow_g2(t, p, m, params));
  if (top >= 2) out.add({0, 0}, flow_g2(t, 0, m, params));
  if (top >= 4)
    for (const auto& tup : conserving_tuples(4, m - 1)) {
      const double inc = flow_g4(t, {tup[0], tup[1], tup[2], tup[3]}, m, params);
      if (inc != 0.0) out.add(tup, inc);
    }
  if (top >= 6)
    for (const auto& tup : conserving_tuples(6, m - 1)) {
      const double inc = flow_g6(t, {tup[0], tup[1], tup[2], tup[3], tup[4], tup[5]}, m, params, w);
      if (inc != 0.0) out.add(tup, inc);
    }
  return out;
}

double zero_mode_completion(double g0, double g00, const FlowParams& params) {
  if (!(g00 > 0)) throw NegativeGapError(g00);
  const double b = params.beta;
  return g0 + std::log(params.hbar * params.hbar * b * b * g00 / params.mass) / (2.0 * b);
}

FamilyFlowResult run_family_flow(const AnharmonicSpec& spec, int truncation,
                                 const FlowParams& params) {
  spec.validate();
  params.validate();
  if (truncation < 2 || truncation % 2 != 0)
    throw std::invalid_argument("family flow needs an even truncation order >= 2");
  std::vector<double> tower = spec.taylor(truncation);
  for (int m = params.top_mode(); m >= 1; --m) tower = naive_lpa_tower_step(tower, m, params);
  const double g0 = tower[0];
  const double g00 = tower[2];
  if (g00 < 0) throw NegativeGapError(g00);
  FamilyFlowResult r;
  r.tower = tower;
  r.spectrum.e0_constrained = g0;
  r.spectrum.e0 = zero_mode_completion(g0, g00, params);
  r.spectrum.gap = params.hbar * std::sqrt(g00 / params.mass);
  r.spectrum.e1 = r.spectrum.e0 + r.spectrum.gap;
  r.spectrum.size = params.n_slices;
  r.spectrum.notes.push_back("E0 includes the zero-mode integral; e0_constrained is g0 at m=0");
  return r;
}

}  // namespace rgqm
