#include "rgqm/generalized_flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rgqm/errors.hpp"
#include "rgqm/lpa_flow.hpp"
#include "rgqm/series.hpp"

namespace rgqm {

namespace {

double mu_of(int m, const FlowParams& params) { return params.mass * omega_sq(m, params); }

ModeVector truncate_background(const ModeVector& bg, int keep) {
  ModeVector out = bg;
  if (static_cast<int>(out.modes.size()) > keep) out.modes.resize(std::max(keep, 0));
  return out;
}

// Taylor coefficients of V around x0 up to `order`.
Series local_series(const std::vector<double>& a, double x0, int order) {
  return shift_polynomial(a, x0, order);
}

}  // namespace

GeneralizedPotential::GeneralizedPotential(ModePolynomial poly, int cutoff, int n_slices)
    : poly_(std::move(poly)), cutoff_(cutoff), n_slices_(n_slices) {}

GeneralizedPotential GeneralizedPotential::from_table(const CouplingTable& t, int n_slices) {
  ModePolynomial p(t.max_order);
  const double np = n_slices + 1.0;
  for (const auto& [mono, g] : t.entries) {
    const double scale = multiplicity_factorial(mono) * std::pow(np, 0.5 * mono.size());
    p.add(mono, g / scale);
  }
  return GeneralizedPotential(std::move(p), t.cutoff, n_slices);
}

CouplingTable GeneralizedPotential::to_table(double drop_below) const {
  CouplingTable t;
  t.max_order = poly_.max_degree();
  t.cutoff = cutoff_;
  const double np = n_slices_ + 1.0;
  for (const auto& [mono, c] : poly_.terms()) {
    if (momentum(mono) != 0) continue;
    const double g = c * multiplicity_factorial(mono) * std::pow(np, 0.5 * mono.size());
    if (std::abs(g) <= drop_below) continue;
    t.entries[mono] = g;
  }
  return t;
}

ModePolynomial GeneralizedPotential::derivative(const std::vector<int>& modes, int zero_mode) const {
  ModePolynomial p = poly_;
  for (int k : modes) p = p.derivative(k);
  if (zero_mode > 0) p = p.drop_mode(zero_mode);
  return p.truncated(poly_.max_degree()) * std::pow(n_slices_ + 1.0, 0.5 * modes.size());
}

std::complex<double> background_value(const ModeVector& bg, int k, int n_slices) {
  if (k == 0) return std::sqrt(n_slices + 1.0) * bg.x0;
  const int a = std::abs(k);
  if (a > static_cast<int>(bg.modes.size())) return 0.0;
  return k > 0 ? bg.modes[a - 1] : std::conj(bg.modes[a - 1]);
}

std::complex<double> GeneralizedPotential::evaluate(const ModeVector& background) const {
  return poly_.evaluate([&](int k) { return background_value(background, k, n_slices_); });
}

std::complex<double> GeneralizedPotential::derivative_at(const std::vector<int>& modes,
                                                         const ModeVector& background) const {
  return derivative(modes).evaluate(
      [&](int k) { return background_value(background, k, n_slices_); });
}

double QuadraticForm2x2::source_term() const {
  const double d = det();
  // A^{-1} = [[a22, -a12], [-a12, a11]] / det
  return (a22 * j1 * j1 - 2.0 * a12 * j1 * j2 + a11 * j2 * j2) / d;
}

QuadraticForm2x2 assemble_A_J(const GeneralizedPotential& u, const ModeVector& background, int m,
                              const FlowParams& params) {
  const ModeVector bg = truncate_background(background, m - 1);
  const double mu = mu_of(m, params);
  const double d = mu + u.derivative_at({m, -m}, bg).real();
  const std::complex<double> b = u.derivative_at({m, m}, bg);
  const std::complex<double> src = u.derivative_at({m}, bg);
  QuadraticForm2x2 q;
  q.a11 = (d + b.real()) / mu;
  q.a22 = (d - b.real()) / mu;
  q.a12 = -b.imag() / mu;
  const double s = std::sqrt(params.beta / mu);
  q.j1 = s * src.real();
  q.j2 = -s * src.imag();
  return q;
}

double gaussian_step(double s_over_hbar, const QuadraticForm2x2& q, double guard) {
  const double d = q.det();
  if (!(d > guard)) throw ConvexityError(-1, 0.0, d);
  return s_over_hbar + 0.5 * std::log(d) - q.source_term();
}

GeneralizedPotential generalized_potential_step(const GeneralizedPotential& u, int m,
                                                const FlowParams& params) {
  if (m < 1 || m > u.cutoff()) throw std::domain_error("generalized step: mode out of range");
  const int k = u.poly().max_degree();
  const double mu = mu_of(m, params);
  const ModePolynomial d = ModePolynomial::constant(mu, k) + u.derivative({m, -m}, m);
  const ModePolynomial b = u.derivative({m, m}, m);
  const ModePolynomial bbar = u.derivative({-m, -m}, m);
  const ModePolynomial src = u.derivative({m}, m);
  const ModePolynomial srcbar = u.derivative({-m}, m);

  const ModePolynomial det = d * d - b * bbar;
  const double lead = det.constant_term() / (mu * mu);
  if (!(lead > kLogGuard)) throw ConvexityError(m, 0.0, lead);

  const ModePolynomial log_term = (det * (1.0 / (mu * mu))).log() * (0.5 / params.beta);
  const ModePolynomial num = d * src * srcbar - (bbar * src * src + b * srcbar * srcbar) * 0.5;
  const ModePolynomial tree = num * det.inverse();

  ModePolynomial next = u.poly().drop_mode(m) + log_term - tree;
  ModePolynomial clean(k);
  for (const auto& [mono, c] : next.terms())
    if (c != 0.0 && momentum(mono) == 0) clean.set(mono, c);
  return GeneralizedPotential(std::move(clean), m - 1, u.n_slices());
}

CouplingTable full_table_step(const CouplingTable& t, int m, const FlowParams& params) {
  const auto u = GeneralizedPotential::from_table(t, params.n_slices);
  return generalized_potential_step(u, m, params).to_table();
}

std::vector<std::complex<double>> constant_background_pair(const GeneralizedPotential& u, int m,
                                                           std::complex<double> x0,
                                                           const FlowParams& params) {
  const double mu = mu_of(m, params);
  const double root = std::sqrt(u.n_slices() + 1.0);
  auto at = [&](const ModePolynomial& p) {
    return p.evaluate([&](int k) { return k == 0 ? root * x0 : std::complex<double>(0.0); });
  };
  const std::complex<double> umm = at(u.derivative({m, -m}));
  std::vector<std::complex<double>> out;
  out.push_back(at(u.poly()) + std::log(1.0 + umm / mu) / params.beta);
  for (int p = 0; p <= m - 1; ++p) {
    const std::complex<double> upp = at(u.derivative({p, -p}));
    const std::complex<double> four = at(u.derivative({p, -p, m, -m}));
    out.push_back(upp + four / (mu + umm) / params.beta);
  }
  return out;
}

double inconsistency_gap(const std::vector<double>& a, double x0, int m, const FlowParams& params) {
  const double mu = mu_of(m, params);
  const Series v = local_series(a, x0, 4);
  // 1 + V''(x0 + t)/mu to second order in t
  Series s(2);
  s[0] = 1.0 + 2.0 * v[2] / mu;
  s[1] = 6.0 * v[3] / mu;
  s[2] = 12.0 * v[4] / mu;
  const double lpa_second = s.log().derivative(2) / params.beta;
  const double v2 = 2.0 * v[2];
  const double v4 = 24.0 * v[4];
  return lpa_second - v4 / (mu + v2) / params.beta;
}

double inconsistency_gap_closed_form(const std::vector<double>& a, double x0, int m,
                                     const FlowParams& params) {
  const double mu = mu_of(m, params);
  const Series v = local_series(a, x0, 3);
  const double v2 = 2.0 * v[2];
  const double v3 = 6.0 * v[3];
  return -v3 * v3 / ((mu + v2) * (mu + v2)) / params.beta;
}

double local_ansatz_log_term(const std::vector<double>& a, const ModeVector& background, int m,
                             const FlowParams& params) {
  const ModeVector bg = truncate_background(background, m - 1);
  const std::vector<double> path = reconstruct_path(bg, params);
  const double mu = mu_of(m, params);
  const int np = params.n_points();
  double s1 = 0.0;
  std::complex<double> s2 = 0.0;
  for (int n = 0; n < np; ++n) {
    const double v2 = local_series(a, path[n], 2)[2] * 2.0;
    s1 += v2;
    const double phase = 2.0 * 2.0 * std::numbers::pi * m * n / np;
    s2 += v2 * std::polar(1.0, phase);
  }
  s1 /= np * mu;
  const double dbl = std::norm(s2) / (static_cast<double>(np) * np * mu * mu);
  const double arg = (1.0 + s1) * (1.0 + s1) - dbl;
  if (!(arg > kLogGuard)) throw ConvexityError(m, bg.x0, arg);
  return 0.5 * std::log(arg);
}

LocalityWitness locality_witness(const std::vector<double>& a, int m, double x0, double amplitude,
                                 const std::vector<int>& modes, const FlowParams& params) {
  LocalityWitness w;
  w.modes = modes;
  for (int k : modes) {
    if (k < 1 || k >= m) throw std::invalid_argument("locality witness: modes must lie in 1..m-1");
    ModeVector bg;
    bg.x0 = x0;
    bg.modes.assign(k, 0.0);
    bg.modes[k - 1] = amplitude * std::sqrt(params.n_points()) / 2.0;
    w.values.push_back(local_ansatz_log_term(a, bg, m, params));
  }
  const auto [lo, hi] = std::minmax_element(w.values.begin(), w.values.end());
  w.spread = *hi - *lo;
  return w;
}

}  // namespace rgqm
