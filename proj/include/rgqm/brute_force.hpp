#pragma once

#include <complex>
#include <functional>
#include <map>
#include <vector>

#include "rgqm/coupling_flow.hpp"
#include "rgqm/polynomial.hpp"

namespace rgqm {

struct QuadratureSpec {
  double tolerance = 1e-12;  // requested relative accuracy of each 1D pass
  double fail_above = 1e-8;  // QuadratureNonConvergence past this estimate
  int max_depth = 12;
  double exponent_cut = 46.0;  // integrate out to where the Gaussian weight is e^{-cut}
};

// Mode variables xi_k for the background; independent complex values so that the
// polynomial dependence can be probed off the real slice. Missing modes are zero.
using Background = std::map<int, std::complex<double>>;

// Dependence of U_m on the integrated mode at a fixed background:
// sum_{a,b} c[a][b] x_m^a x_{-m}^b.
struct ModeSlice {
  std::vector<std::vector<std::complex<double>>> c;
  std::complex<double> operator()(std::complex<double> x, std::complex<double> xbar) const;
};

// Built directly from the table entries, independently of the polynomial engine.
ModeSlice slice_from_table(const CouplingTable& t, const Background& bg, int m, int n_slices);

// -log[(1/pi) int d^2z exp(-(s(z) - s(0)))] for an exponent s(z1, z2) whose real part
// grows at least quadratically. The box is centred on the minimum of Re s.
std::complex<double> log_mode_integral(
    const std::function<std::complex<double>(double, double)>& s, const QuadratureSpec& q);

// U_{m-1}(bg) = U(bg, 0) - (1/beta) log[(beta mu/(pi (N+1))) int d^2x
//               exp(-beta (mu |x|^2/(N+1) + U(bg, x) - U(bg, 0)))]
std::complex<double> brute_force_step(const ModeSlice& slice, double mu, int n_slices,
                                      double beta, const QuadratureSpec& q = {});

// f(beta) ~ tree + loop/beta + ..., from beta0 * 2^i, i < levels.
struct BetaExpansion {
  std::complex<double> tree;
  std::complex<double> loop;
  std::complex<double> at(double beta) const { return tree + loop / beta; }
};
BetaExpansion richardson_in_beta(const std::function<std::complex<double>(double)>& f,
                                 double beta0, int levels = 4);

// Raw monomial coefficients of a momentum-conserving function of the background modes
// |k| < m, for m = 1 (circle in xi_0) or m = 2 (torus in xi_0, xi_1 with xi_{-1} real).
// radius0 is |xi_0|, radius1 is |xi_{+-1}|.
std::map<Monomial, std::complex<double>> cauchy_coefficients(
    const std::function<std::complex<double>(const Background&)>& f, int m, int max_degree,
    int points, double radius0, double radius1);

// Same, with the values supplied per background in one batch (used to share work across
// beta levels). Returns the list of sample backgrounds and a decoder.
std::vector<Background> cauchy_nodes(int m, int points, double radius0, double radius1);
std::map<Monomial, std::complex<double>> cauchy_decode(const std::vector<std::complex<double>>& values,
                                                       int m, int max_degree, int points,
                                                       double radius0, double radius1);

// Couplings g = raw * prod c_k! * (N+1)^{p/2}.
std::map<Monomial, std::complex<double>> raw_to_couplings(
    const std::map<Monomial, std::complex<double>>& raw, int n_slices);

struct OracleSpec {
  int points = 12;         // Cauchy nodes per angle
  double radius_y = 0.25;  // |xi|/sqrt(N+1) on the contour
  int levels = 4;          // beta, 2 beta, 4 beta, 8 beta
  QuadratureSpec quad;
};

// Couplings of U_{m-1} from brute-force integration of the table's action, split into the
// beta-independent and 1/beta parts.
struct OracleCouplings {
  std::map<Monomial, std::complex<double>> tree;
  std::map<Monomial, std::complex<double>> loop;
  double at(const Monomial& mono, double beta) const;
};

OracleCouplings oracle_step_couplings(const CouplingTable& t, int m, int n_slices, double mu,
                                      double beta0, const OracleSpec& spec = {});

}  // namespace rgqm
