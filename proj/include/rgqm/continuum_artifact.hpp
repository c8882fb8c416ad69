#pragma once

#include <string>
#include <vector>

#include "rgqm/brute_force.hpp"
#include "rgqm/core.hpp"

namespace rgqm {

// Shell |p| in [k - dk/2, k + dk/2], external momentum q, derivatives of U_k at x0.
struct ShellSpec {
  double k = 1.0;
  double delta_k = 1e-3;
  double q = 0.0;
  double u2 = 1.0;
  double u3 = 1.0;
  double u4 = 0.0;
  double z = 1.0;
  double mass = 1.0;

  double g(double p) const { return z * p * p + u2; }
  void validate() const;  // throws std::invalid_argument
};

// (U3)^2 (dk - |q|)/(2 G(k)^2) for |q| <= dk, else 0.
double f_q_analytic(const ShellSpec& s);

// kappa int dp int dp' [delta(p + p' + q) + delta(p + p' - q)]/(G(p) G(p')) + h.c. over the
// two-sided shell, with the deltas resolved into 1D pieces. kappa = (U3)^2/16 makes the
// small-q limit coincide with f_q_analytic.
double f_q_shell_quadrature(const ShellSpec& s);

// Discrete counterpart: one exact step over the pair (m, -m) of a local table with
// V'' = u2, V''' = u3, V'''' = u4, and the part of the x_q x_-q coupling that the cubic
// coupling generates.
struct DiscreteProbe {
  int n_slices = 8;
  int m = 2;
  int q = 1;  // 1 <= q < m
  double u2 = 1.0;
  double u3 = 1.0;
  double u4 = 0.0;
};

// From the polynomial step: coupling (-q, q) with the cubic present minus without it.
double f_q_discrete(const DiscreteProbe& probe, const FlowParams& params);

// The same quantity from brute-force integration, read off a circle in xi_q.
double f_q_discrete_oracle(const DiscreteProbe& probe, const FlowParams& params,
                           const OracleSpec& spec = {});

struct FqRow {
  double q = 0.0;
  double analytic = 0.0;
  double quadrature = 0.0;
  double discrete = 0.0;
};

// q from 0 to q_max in n steps; the discrete column uses probe for every row.
std::vector<FqRow> fq_table(ShellSpec s, double q_max, int n, const DiscreteProbe& probe,
                            const FlowParams& params);

// Slopes of f_q_shell_quadrature just below and just above |q| = dk.
struct KinkEstimate {
  double slope_below = 0.0;
  double slope_above = 0.0;
  double jump() const { return slope_above - slope_below; }
};
KinkEstimate kink_at_delta_k(ShellSpec s, double h);

}  // namespace rgqm
