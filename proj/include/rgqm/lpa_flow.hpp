#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "rgqm/core.hpp"

namespace rgqm {

constexpr double kLogGuard = 1e-12;

enum class DerivScheme { CentralDifference, PolyFit };

// V sampled on a uniform grid of n_points between x_min and x_max.
struct PotentialGrid {
  double x_min = -1.0;
  double x_max = 1.0;
  std::vector<double> values;
  DerivScheme deriv_scheme = DerivScheme::CentralDifference;

  static PotentialGrid sample(const std::function<double(double)>& v, double x_min, double x_max,
                              int n_points, DerivScheme scheme = DerivScheme::CentralDifference);

  int n_points() const { return static_cast<int>(values.size()); }
  double spacing() const { return (x_max - x_min) / (n_points() - 1); }
  double x(int i) const { return x_min + i * spacing(); }
  // Linear interpolation; throws std::out_of_range outside [x_min, x_max].
  double value_at(double x) const;
  void validate() const;
};

double second_derivative(const PotentialGrid& grid, int i);
std::vector<double> second_derivatives(const PotentialGrid& grid);

struct FlowStep {
  int m = 0;
  double omega_sq = 0.0;
  double v_min = 0.0;
  double v_at_zero = 0.0;
  double v2_at_zero = 0.0;
};

struct FlowTrace {
  std::vector<FlowStep> steps;
  bool completed = false;
  bool halted = false;
  std::vector<std::string> warnings;
};

// One mode: V_{m-1} = V_m + (1/beta) log(1 + V_m''/(M w_m^2)).
PotentialGrid lpa_step(const PotentialGrid& grid, int m, const FlowParams& params,
                       double guard = kLogGuard);

// log10 of the growth of a grid-scale (checkerboard) perturbation over the whole flow,
// prod_m |1 - 4/(h^2 beta (M w_m^2 + min V''))| over the factors above one. The discrete step is
// explicit, so grids much finer than ~1/sqrt(beta) amplify rounding noise.
double checkerboard_growth(const PotentialGrid& grid, const FlowParams& params);

// Runs m = N/2 .. 1. A ConvexityError carries the partial trace.
std::pair<PotentialGrid, FlowTrace> run_lpa_flow(const PotentialGrid& initial,
                                                 const FlowParams& params);

struct GroundState {
  double energy = 0.0;
  std::vector<double> minimizers;
  bool boundary_minimizer = false;
};

GroundState ground_state_energy(const PotentialGrid& v0);

// Adds back the zero-mode integral the flow leaves out:
// F = -(1/beta) log int dx0 sqrt(M/(2 pi hbar^2 beta)) exp(-beta V0(x0)).
// Tends to V0(0) only as beta -> infinity; at beta = 60 the difference is about log(beta)/beta.
double zero_mode_free_energy(const PotentialGrid& v0, const FlowParams& params);

enum class ShellRule { Midpoint, UpperEdge };

// U_{k-dk} = U_k + (hbar dk/2pi) log(1 + U_k''/(Z k^2)) from k = Lambda down to dk.
// Midpoint evaluates the log at (j - 1/2) dk, UpperEdge at j dk.
PotentialGrid run_continuum_lpa(const PotentialGrid& initial, double z, double lambda,
                                double delta_k, const FlowParams& params,
                                ShellRule rule = ShellRule::Midpoint);

}  // namespace rgqm
