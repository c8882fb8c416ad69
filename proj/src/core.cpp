#include "rgqm/core.hpp"
#include "rgqm/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rgqm {

ConvexityError::ConvexityError(int m, double x0, double argument)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "convexity lost at mode m=" << m << ", x0=" << x0 << " (log argument " << argument
           << ")";
        return os.str();
      }()),
      m_(m),
      x0_(x0),
      argument_(argument) {}

QuadratureNonConvergence::QuadratureNonConvergence(const std::string& what, double relative_error)
    : NonConvergence(what), relative_error_(relative_error) {}

NegativeGapError::NegativeGapError(double g00)
    : std::runtime_error("negative mass gap g0^{0,0}=" + std::to_string(g00) +
                         "; truncation has broken down"),
      g00_(g00) {}

ConfigError::ConfigError(std::string path, const std::string& reason)
    : std::runtime_error(path + ": " + reason), path_(std::move(path)) {}

FlowParams FlowParams::from_epsilon(int n, double eps, double hbar, double mass,
                                    FreqConvention conv) {
  FlowParams p;
  p.n_slices = n;
  p.epsilon = eps;
  p.hbar = hbar;
  p.mass = mass;
  p.beta = (n + 1) * eps / hbar;
  p.freq_convention = conv;
  p.validate();
  return p;
}

FlowParams FlowParams::from_beta(int n, double beta, double hbar, double mass,
                                 FreqConvention conv) {
  FlowParams p;
  p.n_slices = n;
  p.beta = beta;
  p.hbar = hbar;
  p.mass = mass;
  p.epsilon = hbar * beta / (n + 1);
  p.freq_convention = conv;
  p.validate();
  return p;
}

void FlowParams::validate() const {
  if (n_slices < 2) throw std::invalid_argument("n_slices must be >= 2");
  if (n_slices % 2 != 0) throw std::invalid_argument("n_slices must be even");
  if (!(epsilon > 0) || !(hbar > 0) || !(mass > 0) || !(beta > 0))
    throw std::invalid_argument("epsilon, hbar, mass and beta must be positive");
  const double lhs = hbar * beta;
  const double rhs = (n_slices + 1) * epsilon;
  if (std::abs(lhs - rhs) > 1e-12 * std::max(lhs, rhs))
    throw std::invalid_argument("hbar*beta must equal (N+1)*epsilon");
}

double omega_sq(int m, const FlowParams& params) {
  if (m < 0 || m > params.top_mode()) throw std::domain_error("mode index out of range");
  if (m == 0) return 0.0;
  const double c = std::cos(2.0 * std::numbers::pi * m / params.n_points());
  const double e2 = params.epsilon * params.epsilon;
  if (params.freq_convention == FreqConvention::Laplacian) return (2.0 - 2.0 * c) / e2;
  return (2.0 - c) / e2;
}

FrequencyTable frequency_table(const FlowParams& params) {
  FrequencyTable t;
  t.omega_sq.resize(params.top_mode() + 1);
  for (int m = 0; m <= params.top_mode(); ++m) t.omega_sq[m] = omega_sq(m, params);
  return t;
}

std::vector<std::complex<double>> reconstruct_path_complex(const ModeVector& v,
                                                           const FlowParams& params) {
  if (static_cast<int>(v.modes.size()) > params.top_mode())
    throw std::domain_error("more modes than the lattice supports");
  const int np = params.n_points();
  const double norm = 1.0 / std::sqrt(static_cast<double>(np));
  std::vector<std::complex<double>> x(np);
  for (int n = 0; n < np; ++n) {
    std::complex<double> s = v.x0;
    for (std::size_t k = 0; k < v.modes.size(); ++k) {
      const int m = static_cast<int>(k) + 1;
      const double th = 2.0 * std::numbers::pi * static_cast<double>((m * n) % np) / np;
      const std::complex<double> e(std::cos(th), std::sin(th));
      s += norm * (e * v.modes[k] + std::conj(e) * std::conj(v.modes[k]));
    }
    x[n] = s;
  }
  return x;
}

std::vector<double> reconstruct_path(const ModeVector& v, const FlowParams& params) {
  const auto xc = reconstruct_path_complex(v, params);
  std::vector<double> x(xc.size());
  for (std::size_t i = 0; i < xc.size(); ++i) x[i] = xc[i].real();
  return x;
}

double measure_norm(const FlowParams& params) {
  double prod = 1.0;
  const double e2 = params.epsilon * params.epsilon;
  for (int m = 1; m <= params.top_mode(); ++m) prod *= e2 * omega_sq(m, params);
  return prod;
}

double free_partition_from_modes(const FlowParams& params, double length) {
  // Zero mode: sqrt(N+1) Jacobian and one factor of the slice normalization.
  // Each complex mode: 2 d^2x_m Jacobian against (M/(2 pi hbar eps)) gives 1/(eps^2 w_m^2).
  const double zero =
      length * std::sqrt(params.mass * params.n_points() /
                         (2.0 * std::numbers::pi * params.hbar * params.epsilon));
  return zero / measure_norm(params);
}

double free_partition_exact(const FlowParams& params, double length) {
  const int np = params.n_points();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(np, np);
  for (int i = 0; i < np; ++i) {
    k(i, i) += 2.0;
    k(i, (i + 1) % np) -= 1.0;
    k((i + 1) % np, i) -= 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  double log_pdet = 0.0;
  for (int i = 1; i < np; ++i) log_pdet += std::log(ev(i));  // ev(0) is the zero mode
  const double zero =
      length * std::sqrt(params.mass * np / (2.0 * std::numbers::pi * params.hbar * params.epsilon));
  return zero * std::exp(-0.5 * log_pdet);
}

}  // namespace rgqm
