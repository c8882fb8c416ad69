#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "rgqm/core.hpp"

namespace rgqm {

struct SpectrumResult {
  double e0 = 0.0;
  double e1 = 0.0;
  double gap = 0.0;
  int size = 0;
  double convergence_estimate = 0.0;
  // For flows: the literal end-of-flow value before the zero-mode integral is added back.
  double e0_constrained = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> notes;
};

// H = p^2/(2M) + sum_i a[i] x^i in the eigenbasis of a reference oscillator of frequency
// basis_frequency. Convergence is the change against basis_size/2.
SpectrumResult diag_hermite(const std::vector<double>& poly, int basis_size, double basis_frequency,
                            const FlowParams& params, double tolerance = 1e-6);

// Three-point finite differences with Dirichlet ends on [x_lo, x_hi]. Runs n, 2n and 4n
// points and extrapolates the O(h^2) error away; the estimate compares the last two levels.
SpectrumResult diag_grid(const std::function<double(double)>& v, double x_lo, double x_hi,
                         int n_points, const FlowParams& params, double tolerance = 1e-6);

}  // namespace rgqm
