#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "rgqm/core.hpp"
#include "rgqm/spectrum_oracle.hpp"

namespace rgqm {

// Couplings g_m^{n1..np}, keyed by the sorted momentum tuple.
struct CouplingTable {
  int max_order = 8;
  int cutoff = 0;
  std::map<std::vector<int>, double> entries;

  // Zero for absent or momentum-violating tuples.
  double get(std::vector<int> momenta) const;
  // Throws std::invalid_argument for tuples that break momentum conservation,
  // exceed the cutoff, or exceed max_order.
  void set(std::vector<int> momenta, double value);
  void add(std::vector<int> momenta, double value);

  // Keeps only tuples with every |n| < m.
  CouplingTable pruned_below(int m) const;

  std::string to_json() const;
  static CouplingTable from_json(const std::string& text);

  // g^{n1..np} = V^{(p)}(0) for every conserving tuple, as for a local polynomial potential.
  static CouplingTable from_taylor(const std::vector<double>& derivs, int cutoff, int max_order);
};

// Every sorted tuple of length p with entries in [-cutoff, cutoff] summing to zero.
std::vector<std::vector<int>> conserving_tuples(int p, int cutoff);

// V = M Omega^2 x^2/2 + lambda x^4/4!
struct AnharmonicSpec {
  double mass = 1.0;
  double omega = 1.0;
  double lambda = 0.0;

  void validate() const;
  // Power-series coefficients a[i] of V.
  std::vector<double> polynomial() const;
  // Derivatives V^{(n)}(0), n = 0 .. order.
  std::vector<double> taylor(int order) const;
};

// Differentiates (1/beta) log(1 + V''/(M w_m^2)) n times at x0; g[n] = V^{(n)}(x0) and
// everything above g.size()-1 is taken as zero.
std::vector<double> naive_lpa_tower_step(const std::vector<double>& g, int m,
                                         const FlowParams& params);

double flow_g0(const CouplingTable& t, int m, const FlowParams& params);
double flow_g2(const CouplingTable& t, int p, int m, const FlowParams& params);
double flow_g4(const CouplingTable& t, const std::array<int, 4>& p, int m,
               const FlowParams& params);

// Weight per 3-pairing in the cubic loop term and the tree-term prefactor. The defaults are
// the ones fixed by the two-mode quadrature check; printed() gives one per pairing.
struct SexticWeights {
  double cubic_loop = 2.0;
  double tree = 1.0;
  static SexticWeights printed() { return {1.0, 1.0}; }
};

double flow_g6(const CouplingTable& t, const std::array<int, 6>& p, int m,
               const FlowParams& params, const SexticWeights& w = {});

// One scale of the displayed equations applied to every tuple of order <= 6 below m.
CouplingTable display_table_step(const CouplingTable& t, int m, const FlowParams& params,
                                 const SexticWeights& w = {});

// One family representative per order: tower[n] = g^{0..0} with n zeros.
struct FamilyFlowResult {
  SpectrumResult spectrum;
  std::vector<double> tower;
};

// E0 is the zero-mode completed value g0 + (1/2 beta) log(hbar^2 beta^2 g00/M); the literal
// g0 is kept in spectrum.e0_constrained.
FamilyFlowResult run_family_flow(const AnharmonicSpec& spec, int truncation,
                                 const FlowParams& params);

double zero_mode_completion(double g0, double g00, const FlowParams& params);

}  // namespace rgqm
