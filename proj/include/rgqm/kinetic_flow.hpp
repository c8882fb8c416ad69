#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "rgqm/brute_force.hpp"
#include "rgqm/core.hpp"
#include "rgqm/generalized_flow.hpp"
#include "rgqm/lpa_flow.hpp"

namespace rgqm {

// Which reading of the Z increment to use. Derived lets the m <-> -m permutation act on the
// whole bracket, so the constant-background increment is (1/beta) Z''/(Z w^2 + U''), which is
// what direct integration gives. AsPrinted keeps the 1/(2 beta) of the constant-background display.
enum class ZFlowNormalization { Derived, AsPrinted };

// Z(x) = sum_i c[i] x^i, a function of the path value at each slice.
class KineticFunction {
public:
  explicit KineticFunction(std::vector<double> coeffs);
  static KineticFunction constant(double m);

  const std::vector<double>& coefficients() const { return c_; }
  bool is_constant() const;

  // r-th x derivative
  std::complex<double> at(std::complex<double> x, int r = 0) const;
  double at(double x, int r = 0) const;

  // Z^{(n1..nr)}_{m,k}: (1/(N+1)) sum_n Z^{(r)}(y_n) e^{i 2 pi (n1+..+nr+k) n/(N+1)},
  // normalized like U so that constant backgrounds give Z^{(r)}(x0) at zero total index.
  std::complex<double> fourier(const Background& bg, int total_index, int r,
                               const FlowParams& params) const;
  // M_m = Z_{m,0} on the background (the integrated mode excluded by the caller).
  std::complex<double> mass(const Background& bg, const FlowParams& params) const;

private:
  std::vector<double> c_;
};

// xi_0 = sqrt(N+1) x0, xi_{+-k} = x_k, conj(x_k).
Background to_background(const ModeVector& v, int n_slices);

// Path y_n and spectral derivative ydot_n = (N+1)^{-1/2} sum_k i Omega_k xi_k e^{i 2 pi k n/(N+1)}
// with Omega_k = sign(k) w_|k|, so that constant Z reproduces Z w_k^2 |x_k|^2 exactly.
struct PathSample {
  std::vector<std::complex<double>> y;
  std::vector<std::complex<double>> ydot;
};
PathSample sample_path(const Background& bg, const FlowParams& params);

// W = (1/(N+1)) sum_n [Z(y_n) ydot_n^2 / 2 + V(y_n)] for a local polynomial V.
std::complex<double> path_action(const std::vector<double>& v, const KineticFunction& z,
                                 const Background& bg, const FlowParams& params);

struct ABCForms {
  std::complex<double> a;  // A^{(m,-m)}, real on real backgrounds
  std::complex<double> b;  // B^{(m,m)}
  std::complex<double> c;  // C^{(m)}
  std::complex<double> mass;  // M_m
};

// Coefficients of the expansion of U + kinetic in x_m around zero:
//   (M w^2 + A) |x_m|^2/(N+1) + (B x_m^2 + conj(B) x_-m^2)/(2(N+1)) + (C x_m + c.c.)/sqrt(N+1).
// Background modes must lie below m.
ABCForms assemble_ABC(const GeneralizedPotential& u, const KineticFunction& z,
                      const ModeVector& background, int m, const FlowParams& params);

// S_{m-1} = S_m + (1/2 beta) log[(1 + A/mu)^2 - |B/mu|^2]
//           - [(mu + A) |C|^2 - Re(conj(B) C^2)] / [(mu + A)^2 - |B|^2],  mu = M_m w_m^2.
double action_step_with_Z(double s_m, const ABCForms& forms, int m, const FlowParams& params,
                          double guard = kLogGuard);

// Values at a constant background x0: Z, Z^{(m,-m)} = Z''(x0), U, U^{(m,-m)}.
struct LocalData {
  double z = 1.0;
  double z_mm = 0.0;
  double u = 0.0;
  double u_mm = 0.0;
};

struct ZStep {
  double z = 0.0;
  double u = 0.0;
};

// Z_{m-1} = Z + c Z^{(m,-m)}/(Z w^2 + U^{(m,-m)}), c = 1/beta (Derived) or 1/(2 beta) (AsPrinted);
// U_{m-1} = U + (1/beta) log(1 + U^{(m,-m)}/(Z w^2)).
ZStep z_step_constant_background(const LocalData& d, int m, const FlowParams& params,
                                 ZFlowNormalization norm = ZFlowNormalization::Derived);

struct ZGeneralStep {
  std::complex<double> increment;
  bool source_term_omitted = true;
  std::string note;
};

// Increment of the Fourier coefficient Z_{m,i+j} on a background, following the printed
// kinetic flow equation with its m <-> -m permutation. d_j Z means the derivative taken along
// background mode j. The source-term contribution is not included.
ZGeneralStep z_step_general(const KineticFunction& z, const GeneralizedPotential& u,
                            const ModeVector& background, int i, int j, int m,
                            const FlowParams& params,
                            ZFlowNormalization norm = ZFlowNormalization::Derived);

// Residuals of the four listed relations between Fourier coefficients of Z derivatives at
// total index k. They all vanish when every coefficient involved vanishes, which is the
// constant-background situation at generic k.
struct SymmetryResiduals {
  double r_plus_minus = 0.0;   // |Z^{(m)}_k - Z^{(-m)}_k|
  double r_real = 0.0;         // |Im Z^{(m)}_k|
  double r_conj = 0.0;         // |Z^{(m,m)}_k - conj(Z^{(-m,-m)}_k)|
  double r_odd = 0.0;          // |Z^{(m)}_{-2m-k} + Z^{(m)}_{2m-k}|
  double max() const;
};
SymmetryResiduals symmetry_residuals(const KineticFunction& z, const ModeVector& background, int m,
                                     int k, const FlowParams& params);

// Continuum pair, U first then Z within each shell:
//   U_{k-dk} = U_k + (hbar dk/2pi) log(1 + U''/(Z k^2))
//   Z_{k-dk} = Z_k + c dk Z''/(Z k^2 + U''),  c = hbar/2pi (Derived) or hbar/4pi (AsPrinted).
std::pair<PotentialGrid, PotentialGrid> run_continuum_coupled(
    const PotentialGrid& u0, const PotentialGrid& z0, double lambda, double delta_k,
    const FlowParams& params, ZFlowNormalization norm = ZFlowNormalization::Derived,
    ShellRule rule = ShellRule::Midpoint);

// Direct integration over x_m of exp(-beta_loop W) with the M_m(background) measure:
// U_{m-1}(bg) = W(bg, 0) - (1/beta_loop) log[(beta_loop mu/(pi (N+1))) int d^2x e^{-beta_loop (W - W0)}].
std::complex<double> kinetic_brute_force_step(const std::vector<double>& v, const KineticFunction& z,
                                              const Background& bg, int m, double beta_loop,
                                              const FlowParams& params,
                                              const QuadratureSpec& q = {});

// 1/beta coefficients of the increments of U(x0), U''(x0) and Z(x0) on a constant background,
// read off two probe modes p1, p2 < m (their x_p x_-p coefficients differ by Z w_p^2).
struct KineticOracle {
  double u = 0.0;
  double u2 = 0.0;
  double z = 0.0;
};
KineticOracle kinetic_oracle_constant_background(const std::vector<double>& v,
                                                 const KineticFunction& z, double x0, int m,
                                                 int p1, int p2, const FlowParams& params,
                                                 const OracleSpec& spec = {});

}  // namespace rgqm
