#pragma once

#include <complex>
#include <vector>

namespace rgqm {

enum class FreqConvention { Laplacian, PaperLiteral };

// Lattice of N+1 periodic time slices t_n = n*eps, with hbar*beta = (N+1)*eps.
struct FlowParams {
  int n_slices = 0;
  double epsilon = 0.0;
  double hbar = 1.0;
  double mass = 1.0;
  double beta = 0.0;
  FreqConvention freq_convention = FreqConvention::Laplacian;

  static FlowParams from_epsilon(int n, double eps, double hbar = 1.0, double mass = 1.0,
                                 FreqConvention conv = FreqConvention::Laplacian);
  static FlowParams from_beta(int n, double beta, double hbar = 1.0, double mass = 1.0,
                              FreqConvention conv = FreqConvention::Laplacian);

  // Throws std::invalid_argument on a bad field.
  void validate() const;

  int top_mode() const { return n_slices / 2; }
  int n_points() const { return n_slices + 1; }
};

struct FrequencyTable {
  std::vector<double> omega_sq;  // index m = 0 .. N/2
};

// Zero mode plus complex amplitudes x_1..x_mmax; x_{-m} = conj(x_m) is implicit.
struct ModeVector {
  double x0 = 0.0;
  std::vector<std::complex<double>> modes;
};

double omega_sq(int m, const FlowParams& params);
FrequencyTable frequency_table(const FlowParams& params);

// x(t_n) = x0 + (N+1)^{-1/2} sum_m (e^{i w_m t_n} x_m + c.c.), with w_m t_n = 2 pi m n/(N+1).
std::vector<double> reconstruct_path(const ModeVector& v, const FlowParams& params);

// Same sum kept complex, for checking that the imaginary part vanishes.
std::vector<std::complex<double>> reconstruct_path_complex(const ModeVector& v,
                                                           const FlowParams& params);

// prod_{m=1}^{N/2} eps^2 w_m^2 under the active convention.
double measure_norm(const FlowParams& params);

// Free-particle partition function on a ring of length L assembled mode by mode.
double free_partition_from_modes(const FlowParams& params, double length);

// Same quantity from the pseudo-determinant of the periodic second-difference matrix.
double free_partition_exact(const FlowParams& params, double length);

}  // namespace rgqm
