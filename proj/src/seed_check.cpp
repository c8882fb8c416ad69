#include "rgqm/seed_check.hpp"

#include <cmath>
#include <sstream>

#include "rgqm/coupling_flow.hpp"
#include "rgqm/generalized_flow.hpp"

namespace rgqm {

namespace {

constexpr int kN = 4;
constexpr int kM = 2;
constexpr double kBeta = 50.0;

// Mass chosen so that M w_2^2 = 1.
FlowParams unit_mu_params() {
  const FlowParams probe = FlowParams::from_beta(kN, kBeta);
  return FlowParams::from_beta(kN, kBeta, 1.0, 1.0 / omega_sq(kM, probe));
}

std::string label(const std::string& what, const std::vector<int>& tup) {
  std::ostringstream os;
  os << what << " (";
  for (std::size_t i = 0; i < tup.size(); ++i) os << (i ? "," : "") << tup[i];
  os << ")";
  return os.str();
}

SeedCheckLine line(std::string name, double oracle, double formula, bool informational = false) {
  SeedCheckLine l;
  l.name = std::move(name);
  l.oracle = oracle;
  l.formula = formula;
  l.informational = informational;
  l.pass = std::abs(oracle - formula) <= l.tolerance;
  return l;
}

CouplingTable base_table() {
  CouplingTable t;
  t.max_order = 6;
  t.cutoff = kM;
  t.set({-2, 2}, 0.3);
  return t;
}

double increment(const OracleCouplings& o, const CouplingTable& t, const std::vector<int>& tup) {
  return o.at(tup, kBeta) - t.get(tup);
}

}  // namespace

bool SeedCheckReport::all_pass() const {
  for (const auto& l : lines)
    if (!l.informational && !l.pass) return false;
  return true;
}

SeedCheckReport run_seed_check(const OracleSpec& spec) {
  const FlowParams p = unit_mu_params();
  const double mu = 1.0;
  const double d = mu + 0.3;
  SeedCheckReport rep;

  // Pair couplings only: exact result is (1/beta) log(D(bg)/mu).
  CouplingTable pairs = base_table();
  pairs.set({0, 0, -2, 2}, 0.4);
  pairs.set({-1, 1, -2, 2}, 0.25);
  {
    const auto o = oracle_step_couplings(pairs, kM, kN, mu, kBeta, spec);
    rep.lines.push_back(line("g0", increment(o, pairs, {}), flow_g0(pairs, kM, p)));
    rep.lines.push_back(line("g2 p=0", increment(o, pairs, {0, 0}), flow_g2(pairs, 0, kM, p)));
    rep.lines.push_back(line("g2 p=1", increment(o, pairs, {-1, 1}), flow_g2(pairs, 1, kM, p)));
    for (const std::vector<int>& tup : {std::vector<int>{0, 0, 0, 0}, {-1, -1, 1, 1}, {-1, 0, 0, 1}})
      rep.lines.push_back(line(label("g4 pairings", tup), increment(o, pairs, tup),
                               flow_g4(pairs, {tup[0], tup[1], tup[2], tup[3]}, kM, p)));
  }

  // Add six-point couplings carrying the (m,-m) pair: split and cubic loop terms.
  CouplingTable six = pairs;
  six.set({0, 0, 0, 0, -2, 2}, 0.2);
  six.set({-1, 0, 0, 1, -2, 2}, 0.15);
  six.set({-1, -1, 1, 1, -2, 2}, 0.1);
  {
    const auto o = oracle_step_couplings(six, kM, kN, mu, kBeta, spec);
    double wsum = 0.0;
    int wcount = 0;
    for (const std::vector<int>& tup : {std::vector<int>{0, 0, 0, 0, 0, 0}, {-1, 0, 0, 0, 0, 1},
                                        {-1, -1, 0, 0, 1, 1}, {-1, -1, -1, 1, 1, 1}}) {
      const std::array<int, 6> a{tup[0], tup[1], tup[2], tup[3], tup[4], tup[5]};
      const double inc = increment(o, six, tup);
      const double with_two = flow_g6(six, a, kM, p);
      const double with_one = flow_g6(six, a, kM, p, SexticWeights::printed());
      rep.lines.push_back(line(label("g6 loop", tup), inc, with_two));
      rep.lines.push_back(line(label("g6 loop, one per 3-pairing", tup), inc, with_one, true));
      // the cubic sum alone is the difference between the two weightings
      const double cubic = (with_two - with_one) * kBeta * d * d * d;
      if (std::abs(cubic) > 1e-12) {
        const double rest = with_two - 2.0 * cubic / (d * d * d) / kBeta;
        wsum += (inc - rest) * kBeta * d * d * d / cubic;
        ++wcount;
      }
    }
    rep.cubic_loop_weight = wcount ? wsum / wcount : 0.0;
  }

  // One fluctuation leg: only the tree term survives, and the action is Gaussian.
  CouplingTable tree = base_table();
  tree.set({-1, -1, 0, 2}, 0.2);
  tree.set({-2, 0, 1, 1}, 0.2);
  {
    const auto o = oracle_step_couplings(tree, kM, kN, mu, kBeta, spec);
    const std::vector<int> tup{-1, -1, 0, 0, 1, 1};
    const double inc = increment(o, tree, tup);
    const double printed = flow_g6(tree, {-1, -1, 0, 0, 1, 1}, kM, p);
    rep.lines.push_back(line(label("g6 tree", tup), inc, printed));
    rep.tree_prefactor = printed != 0.0 ? inc / printed : 0.0;
    auto it = o.loop.find(tup);
    rep.tree_loop_part = it == o.loop.end() ? 0.0 : it->second.real();
  }

  // Cubic couplings feed a quartic tree term that the quartic display does not contain.
  CouplingTable cubic = base_table();
  cubic.set({-1, -1, 2}, 0.3);
  cubic.set({-2, 1, 1}, 0.3);
  {
    const auto o = oracle_step_couplings(cubic, kM, kN, mu, kBeta, spec);
    const std::vector<int> tup{-1, -1, 1, 1};
    const double inc = increment(o, cubic, tup);
    const double general = full_table_step(cubic, kM, p).get(tup) - cubic.get(tup);
    rep.lines.push_back(line(label("g4 from cubic, general step", tup), inc, general));
    rep.lines.push_back(line(label("g4 from cubic, quartic display", tup), inc,
                             flow_g4(cubic, {-1, -1, 1, 1}, kM, p), true));
  }
  return rep;
}

}  // namespace rgqm
