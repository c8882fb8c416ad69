#include "rgqm/lpa_flow.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>

#include "rgqm/errors.hpp"
#include "rgqm/parallel.hpp"

namespace rgqm {

namespace {

constexpr int kFitWindow = 7;
constexpr std::size_t kParallelThreshold = 8192;

// Weights w_j with V''(x_i) h^2 = sum_j w_j (V_{s+j} - V_i), one set per position of i in the window.
const std::array<std::array<double, kFitWindow>, kFitWindow>& polyfit_weights() {
  static const auto table = [] {
    std::array<std::array<double, kFitWindow>, kFitWindow> w{};
    for (int pos = 0; pos < kFitWindow; ++pos) {
      Eigen::Matrix<double, kFitWindow, 5> x;
      for (int j = 0; j < kFitWindow; ++j) {
        const double t = j - pos;
        for (int k = 0; k < 5; ++k) x(j, k) = std::pow(t, k);
      }
      const Eigen::Matrix<double, 5, kFitWindow> pinv =
          (x.transpose() * x).ldlt().solve(x.transpose());
      for (int j = 0; j < kFitWindow; ++j) w[pos][j] = 2.0 * pinv(2, j);
    }
    return w;
  }();
  return table;
}

double central(const std::vector<double>& v, int i, double h2) {
  const int n = static_cast<int>(v.size());
  if (i == 0) return (2.0 * (v[0] - v[1]) - 3.0 * (v[1] - v[2]) + (v[2] - v[3])) / h2;
  if (i == n - 1)
    return (2.0 * (v[n - 1] - v[n - 2]) - 3.0 * (v[n - 2] - v[n - 3]) + (v[n - 3] - v[n - 4])) / h2;
  return ((v[i + 1] - v[i]) - (v[i] - v[i - 1])) / h2;
}

double polyfit(const std::vector<double>& v, int i, double h2) {
  const int n = static_cast<int>(v.size());
  const int start = std::clamp(i - kFitWindow / 2, 0, n - kFitWindow);
  const auto& w = polyfit_weights()[i - start];
  double s = 0.0;
  for (int j = 0; j < kFitWindow; ++j) s += w[j] * (v[start + j] - v[i]);
  return s / h2;
}

template <class Body>
void for_points(std::size_t n, Body&& body) {
  if (n < kParallelThreshold) {
    for (std::size_t i = 0; i < n; ++i) body(i);
  } else {
    parallel_for(n, body);
  }
}

double v2_at(const PotentialGrid& g, const std::vector<double>& v2, double x) {
  const double s = (x - g.x_min) / g.spacing();
  const int i = std::clamp(static_cast<int>(std::floor(s)), 0, g.n_points() - 2);
  const double t = s - i;
  return (1.0 - t) * v2[i] + t * v2[i + 1];
}

FlowStep record(const PotentialGrid& g, int m, double w2) {
  FlowStep st;
  st.m = m;
  st.omega_sq = w2;
  st.v_min = *std::min_element(g.values.begin(), g.values.end());
  if (g.x_min <= 0.0 && g.x_max >= 0.0) {
    st.v_at_zero = g.value_at(0.0);
    st.v2_at_zero = v2_at(g, second_derivatives(g), 0.0);
  } else {
    st.v_at_zero = std::numeric_limits<double>::quiet_NaN();
    st.v2_at_zero = std::numeric_limits<double>::quiet_NaN();
  }
  return st;
}

}  // namespace

PotentialGrid PotentialGrid::sample(const std::function<double(double)>& v, double x_min,
                                    double x_max, int n_points, DerivScheme scheme) {
  PotentialGrid g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.deriv_scheme = scheme;
  g.values.resize(n_points);
  for (int i = 0; i < n_points; ++i) g.values[i] = v(g.x(i));
  g.validate();
  return g;
}

double PotentialGrid::value_at(double x) const {
  if (x < x_min || x > x_max) throw std::out_of_range("point outside the potential grid");
  const double s = (x - x_min) / spacing();
  const int i = std::clamp(static_cast<int>(std::floor(s)), 0, n_points() - 2);
  const double t = s - i;
  if (t == 0.0) return values[i];
  return (1.0 - t) * values[i] + t * values[i + 1];
}

void PotentialGrid::validate() const {
  if (n_points() < 5) throw std::invalid_argument("potential grid needs at least 5 points");
  if (!(x_max > x_min)) throw std::invalid_argument("potential grid needs x_max > x_min");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("potential grid holds a non-finite value");
}

double second_derivative(const PotentialGrid& grid, int i) {
  const double h = grid.spacing();
  if (grid.deriv_scheme == DerivScheme::PolyFit && grid.n_points() >= kFitWindow)
    return polyfit(grid.values, i, h * h);
  return central(grid.values, i, h * h);
}

std::vector<double> second_derivatives(const PotentialGrid& grid) {
  std::vector<double> d(grid.values.size());
  for (int i = 0; i < grid.n_points(); ++i) d[i] = second_derivative(grid, i);
  return d;
}

PotentialGrid lpa_step(const PotentialGrid& grid, int m, const FlowParams& params, double guard) {
  if (m < 1 || m > params.top_mode()) throw std::domain_error("lpa_step: mode index out of range");
  const double mw2 = params.mass * omega_sq(m, params);
  const std::vector<double> v2 = second_derivatives(grid);
  for (int i = 0; i < grid.n_points(); ++i) {
    const double arg = 1.0 + v2[i] / mw2;
    if (!(arg > guard)) throw ConvexityError(m, grid.x(i), arg);
  }
  PotentialGrid out = grid;
  const double inv_beta = 1.0 / params.beta;
  for_points(v2.size(), [&](std::size_t i) {
    out.values[i] = grid.values[i] + inv_beta * std::log1p(v2[i] / mw2);
  });
  return out;
}

double checkerboard_growth(const PotentialGrid& grid, const FlowParams& params) {
  const std::vector<double> v2 = second_derivatives(grid);
  const double v2min = *std::min_element(v2.begin(), v2.end());
  const double h2 = grid.spacing() * grid.spacing();
  double s = 0.0;
  for (int m = 1; m <= params.top_mode(); ++m) {
    const double d = params.mass * omega_sq(m, params) + v2min;
    if (!(d > 0.0)) continue;
    const double f = std::abs(1.0 - 4.0 / (h2 * params.beta * d));
    if (f > 1.0) s += std::log10(f);
  }
  return s;
}

std::pair<PotentialGrid, FlowTrace> run_lpa_flow(const PotentialGrid& initial,
                                                 const FlowParams& params) {
  params.validate();
  initial.validate();
  FlowTrace trace;
  const double growth = checkerboard_growth(initial, params);
  if (growth > 8.0)
    trace.warnings.push_back("grid spacing is below the explicit-step stability limit; rounding "
                             "noise grows by about 1e" + std::to_string(static_cast<int>(growth)));
  PotentialGrid v = initial;
  for (int m = params.top_mode(); m >= 1; --m) {
    try {
      v = lpa_step(v, m, params);
    } catch (ConvexityError& e) {
      trace.halted = true;
      e.trace = std::make_shared<FlowTrace>(trace);
      throw;
    }
    trace.steps.push_back(record(v, m, omega_sq(m, params)));
  }
  trace.completed = true;
  const GroundState gs = ground_state_energy(v);
  if (gs.boundary_minimizer) trace.warnings.push_back("minimum of V0 sits on the grid boundary");
  return {v, trace};
}

GroundState ground_state_energy(const PotentialGrid& v0) {
  GroundState gs;
  const auto& v = v0.values;
  const double vmin = *std::min_element(v.begin(), v.end());
  const double tol = 1e-12 * std::max(1.0, std::abs(vmin));
  const int n = v0.n_points();
  for (int i = 0; i < n; ++i) {
    if (v[i] - vmin > tol) continue;
    // keep one point per flat run of minima
    if (i > 0 && v[i - 1] - vmin <= tol) continue;
    gs.minimizers.push_back(v0.x(i));
    if (i == 0 || i == n - 1) gs.boundary_minimizer = true;
  }
  gs.energy = vmin;
  return gs;
}

double zero_mode_free_energy(const PotentialGrid& v0, const FlowParams& params) {
  const auto& v = v0.values;
  const double vmin = *std::min_element(v.begin(), v.end());
  const double h = v0.spacing();
  double integral = 0.0;
  for (int i = 0; i < v0.n_points(); ++i) {
    const double w = (i == 0 || i == v0.n_points() - 1) ? 0.5 : 1.0;
    integral += w * std::exp(-params.beta * (v[i] - vmin));
  }
  integral *= h;
  const double norm =
      std::sqrt(params.mass / (2.0 * std::numbers::pi * params.hbar * params.hbar * params.beta));
  return vmin - std::log(norm * integral) / params.beta;
}

PotentialGrid run_continuum_lpa(const PotentialGrid& initial, double z, double lambda,
                                double delta_k, const FlowParams& params, ShellRule rule) {
  if (!(lambda > 0.0) || !(delta_k > 0.0) || delta_k > lambda)
    throw std::invalid_argument("continuum flow needs 0 < delta_k <= Lambda");
  if (!(z > 0.0)) throw std::invalid_argument("continuum flow needs Z > 0");
  initial.validate();
  const long steps = std::lround(lambda / delta_k);
  const double pref = params.hbar * delta_k / (2.0 * std::numbers::pi);
  PotentialGrid u = initial;
  std::vector<double> v2(u.values.size());
  for (long j = steps; j >= 1; --j) {
    const double k = rule == ShellRule::Midpoint ? (j - 0.5) * delta_k : j * delta_k;
    const double zk2 = z * k * k;
    for (int i = 0; i < u.n_points(); ++i) {
      v2[i] = second_derivative(u, i);
      const double arg = 1.0 + v2[i] / zk2;
      if (!(arg > kLogGuard)) throw ConvexityError(static_cast<int>(j), u.x(i), arg);
    }
    for (int i = 0; i < u.n_points(); ++i) u.values[i] += pref * std::log1p(v2[i] / zk2);
  }
  return u;
}

}  // namespace rgqm
