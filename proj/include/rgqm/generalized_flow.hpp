#pragma once

#include <complex>
#include <vector>

#include "rgqm/core.hpp"
#include "rgqm/coupling_flow.hpp"
#include "rgqm/polynomial.hpp"

namespace rgqm {

// U_m as a truncated expansion in the mode variables xi_k, |k| <= cutoff.
// xi_0 = sqrt(N+1) x0 so that every index carries the same normalization.
class GeneralizedPotential {
public:
  GeneralizedPotential(ModePolynomial poly, int cutoff, int n_slices);

  // raw monomial coefficient = g / (prod_k c_k! (N+1)^{p/2})
  static GeneralizedPotential from_table(const CouplingTable& t, int n_slices);
  CouplingTable to_table(double drop_below = 0.0) const;

  const ModePolynomial& poly() const { return poly_; }
  int cutoff() const { return cutoff_; }
  int n_slices() const { return n_slices_; }

  // U^{(n1..np)} = (N+1)^{p/2} d^p U/dxi_{n1}..dxi_{np} as a polynomial in the remaining
  // variables, with xi_{+-zero_mode} set to zero when zero_mode > 0.
  ModePolynomial derivative(const std::vector<int>& modes, int zero_mode = 0) const;

  std::complex<double> evaluate(const ModeVector& background) const;
  std::complex<double> derivative_at(const std::vector<int>& modes,
                                     const ModeVector& background) const;

private:
  ModePolynomial poly_;
  int cutoff_;
  int n_slices_;
};

// xi_k for a background: sqrt(N+1) x0 at k = 0, x_k or conj(x_{-k}) otherwise, zero past the list.
std::complex<double> background_value(const ModeVector& bg, int k, int n_slices);

struct QuadraticForm2x2 {
  double a11 = 1.0;
  double a12 = 0.0;
  double a22 = 1.0;
  double j1 = 0.0;
  double j2 = 0.0;

  double det() const { return a11 * a22 - a12 * a12; }
  // J^t A^{-1} J
  double source_term() const;
};

// Dimensionless form after x_m = sqrt((N+1)/(beta M w^2)) (z1 + i z2):
// S/hbar = S_m/hbar + z^t A z + 2 J^t z + ...
QuadraticForm2x2 assemble_A_J(const GeneralizedPotential& u, const ModeVector& background, int m,
                              const FlowParams& params);

// S/hbar -> S/hbar + (1/2) log det A - J^t A^{-1} J
double gaussian_step(double s_over_hbar, const QuadraticForm2x2& q, double guard = 1e-12);

// U_{m-1} = U_m + (1/2 beta) log[(D^2 - |B|^2)/mu^2] - [D |u|^2 - Re(conj(B) u^2)]/(D^2 - |B|^2)
// with D = mu + U^{(m,-m)}, B = U^{(m,m)}, u = U^{(m)}, all at xi_{+-m} = 0.
GeneralizedPotential generalized_potential_step(const GeneralizedPotential& u, int m,
                                                const FlowParams& params);

CouplingTable full_table_step(const CouplingTable& t, int m, const FlowParams& params);

// Constant background: the printed pair
//   U_{m-1}(x0) = U_m(x0) + (1/beta) log(1 + U^{(m,-m)}(x0)/mu)
//   U^{(p,-p)}_{m-1}(x0) = U^{(p,-p)}_m(x0) + (1/beta) U^{(p,-p,m,-m)}(x0)/(mu + U^{(m,-m)}(x0))
// evaluated at a complex x0, returning {U, U^{(0,0)}, U^{(1,-1)}, ..., U^{(m-1,-(m-1))}}.
std::vector<std::complex<double>> constant_background_pair(const GeneralizedPotential& u, int m,
                                                           std::complex<double> x0,
                                                           const FlowParams& params);

// Second x0 derivative of the LPA increment minus the increment of V''; a[i] are the
// power-series coefficients of V.
double inconsistency_gap(const std::vector<double>& a, double x0, int m, const FlowParams& params);
double inconsistency_gap_closed_form(const std::vector<double>& a, double x0, int m,
                                     const FlowParams& params);

// (1/2) log of the bracket in the local-ansatz step, including the double sum over slices.
double local_ansatz_log_term(const std::vector<double>& a, const ModeVector& background, int m,
                             const FlowParams& params);

struct LocalityWitness {
  std::vector<int> modes;
  std::vector<double> values;
  double spread = 0.0;
};

// Evaluates the log term on one-mode backgrounds whose slice values are permutations of each
// other (n -> k n mod N+1). Any sum of a single-argument function over slices gives the same
// number on all of them.
LocalityWitness locality_witness(const std::vector<double>& a, int m, double x0, double amplitude,
                                 const std::vector<int>& modes, const FlowParams& params);

}  // namespace rgqm
