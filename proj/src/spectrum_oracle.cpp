#include "rgqm/spectrum_oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rgqm/errors.hpp"

namespace rgqm {

namespace {

std::pair<double, double> hermite_levels(const std::vector<double>& poly, int n, double w,
                                         const FlowParams& p) {
  const int degree = static_cast<int>(poly.size()) - 1;
  const int padded = n + std::max(degree, 2);
  // x = sqrt(hbar/(2 M w)) (a + a^dagger)
  const double len = std::sqrt(p.hbar / (2.0 * p.mass * w));
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(padded, padded);
  for (int k = 1; k < padded; ++k) {
    x(k - 1, k) = len * std::sqrt(static_cast<double>(k));
    x(k, k - 1) = x(k - 1, k);
  }
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(padded, padded);
  for (int k = 0; k < padded; ++k) h(k, k) = p.hbar * w * (k + 0.5);
  Eigen::MatrixXd x2 = x * x;
  h -= 0.5 * p.mass * w * w * x2;
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(padded, padded);
  for (int i = 0; i <= degree; ++i) {
    if (poly[i] != 0.0) h += poly[i] * power;
    if (i < degree) power = power * x;
  }
  const Eigen::MatrixXd top = h.topLeftCorner(n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(top, Eigen::EigenvaluesOnly);
  return {es.eigenvalues()(0), es.eigenvalues()(1)};
}

std::pair<double, double> grid_levels(const std::function<double(double)>& v, double lo, double hi,
                                      int n_points, const FlowParams& p) {
  const int interior = n_points - 2;
  const double h = (hi - lo) / (n_points - 1);
  const double kin = p.hbar * p.hbar / (2.0 * p.mass * h * h);
  Eigen::VectorXd diag(interior);
  Eigen::VectorXd off(interior - 1);
  for (int i = 0; i < interior; ++i) diag(i) = 2.0 * kin + v(lo + (i + 1) * h);
  off.setConstant(-kin);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  return {es.eigenvalues()(0), es.eigenvalues()(1)};
}

SpectrumResult finish(double e0, double e1, int size, double estimate, double tolerance,
                      const char* who) {
  SpectrumResult r;
  r.e0 = e0;
  r.e1 = e1;
  r.gap = e1 - e0;
  r.size = size;
  r.convergence_estimate = estimate;
  if (estimate > tolerance)
    throw NonConvergence(std::string(who) + ": convergence estimate " + std::to_string(estimate) +
                         " above tolerance");
  return r;
}

}  // namespace

SpectrumResult diag_hermite(const std::vector<double>& poly, int basis_size, double basis_frequency,
                            const FlowParams& params, double tolerance) {
  if (basis_size < 10) throw std::invalid_argument("diag_hermite: basis_size must be >= 10");
  if (!(basis_frequency > 0)) throw std::invalid_argument("diag_hermite: basis frequency must be > 0");
  if (poly.size() % 2 == 0 || poly.back() <= 0.0)
    throw std::invalid_argument("diag_hermite: potential must be an even-degree polynomial bounded below");
  const auto [e0, e1] = hermite_levels(poly, basis_size, basis_frequency, params);
  const auto [h0, h1] = hermite_levels(poly, basis_size / 2, basis_frequency, params);
  const double est = std::max(std::abs(e0 - h0), std::abs(e1 - h1));
  return finish(e0, e1, basis_size, est, tolerance, "diag_hermite");
}

SpectrumResult diag_grid(const std::function<double(double)>& v, double x_lo, double x_hi,
                         int n_points, const FlowParams& params, double tolerance) {
  if (n_points < 200) throw std::invalid_argument("diag_grid: n_points must be >= 200");
  if (!(x_hi > x_lo)) throw std::invalid_argument("diag_grid: empty range");
  std::pair<double, double> lv[3];
  int n = n_points;
  for (int level = 0; level < 3; ++level) {
    lv[level] = grid_levels(v, x_lo, x_hi, n, params);
    n = 2 * n - 1;  // halves the spacing
  }
  auto extrapolate = [&](double a, double b, double c) {
    const double r1 = (4.0 * b - a) / 3.0;
    const double r2 = (4.0 * c - b) / 3.0;
    return std::pair{(16.0 * r2 - r1) / 15.0, r2};
  };
  const auto [e0, e0_prev] = extrapolate(lv[0].first, lv[1].first, lv[2].first);
  const auto [e1, e1_prev] = extrapolate(lv[0].second, lv[1].second, lv[2].second);
  const double est = std::max(std::abs(e0 - e0_prev), std::abs(e1 - e1_prev));
  for (double x : {x_lo, x_hi})
    if (!std::isfinite(v(x))) throw std::invalid_argument("diag_grid: potential not finite on range");
  return finish(e0, e1, (n + 1) / 2, est, tolerance, "diag_grid");
}

}  // namespace rgqm
