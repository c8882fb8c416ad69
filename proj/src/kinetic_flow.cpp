#include "rgqm/kinetic_flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rgqm/errors.hpp"
#include "rgqm/parallel.hpp"

namespace rgqm {

namespace {

using cplx = std::complex<double>;

cplx phase(int k, int n, int np) {
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) * n / np);
}

double signed_omega(int k, const FlowParams& params) {
  const double w = std::sqrt(omega_sq(std::abs(k), params));
  return k < 0 ? -w : w;
}

template <class F>
cplx path_average(const PathSample& ps, int total_index, F f) {
  const int np = static_cast<int>(ps.y.size());
  cplx s = 0.0;
  for (int n = 0; n < np; ++n) s += f(ps.y[n], ps.ydot[n]) * phase(total_index, n, np);
  return s / static_cast<double>(np);
}

Background below(const Background& bg, int m) {
  Background out;
  for (const auto& [k, v] : bg)
    if (std::abs(k) < m) out[k] = v;
  return out;
}

ModeVector truncate(const ModeVector& bg, int keep) {
  ModeVector out = bg;
  if (static_cast<int>(out.modes.size()) > keep) out.modes.resize(std::max(keep, 0));
  return out;
}

cplx poly_at(const std::vector<double>& a, cplx x) {
  cplx s = 0.0;
  for (std::size_t i = a.size(); i-- > 0;) s = s * x + a[i];
  return s;
}

}  // namespace

KineticFunction::KineticFunction(std::vector<double> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty()) c_.push_back(0.0);
}

KineticFunction KineticFunction::constant(double m) { return KineticFunction({m}); }

bool KineticFunction::is_constant() const {
  return std::all_of(c_.begin() + 1, c_.end(), [](double v) { return v == 0.0; });
}

cplx KineticFunction::at(cplx x, int r) const {
  cplx s = 0.0;
  for (std::size_t i = c_.size(); i-- > static_cast<std::size_t>(r);) {
    double f = c_[i];
    for (int j = 0; j < r; ++j) f *= static_cast<double>(i - j);
    s = s * x + f;
  }
  return s;
}

double KineticFunction::at(double x, int r) const { return at(cplx(x), r).real(); }

cplx KineticFunction::fourier(const Background& bg, int total_index, int r,
                              const FlowParams& params) const {
  const PathSample ps = sample_path(bg, params);
  return path_average(ps, total_index, [&](cplx y, cplx) { return at(y, r); });
}

cplx KineticFunction::mass(const Background& bg, const FlowParams& params) const {
  return fourier(bg, 0, 0, params);
}

Background to_background(const ModeVector& v, int n_slices) {
  Background bg;
  bg[0] = std::sqrt(n_slices + 1.0) * v.x0;
  for (std::size_t i = 0; i < v.modes.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    bg[k] = v.modes[i];
    bg[-k] = std::conj(v.modes[i]);
  }
  return bg;
}

PathSample sample_path(const Background& bg, const FlowParams& params) {
  const int np = params.n_points();
  const double root = std::sqrt(static_cast<double>(np));
  PathSample ps;
  ps.y.assign(np, 0.0);
  ps.ydot.assign(np, 0.0);
  for (const auto& [k, xi] : bg) {
    if (xi == 0.0) continue;
    const double w = k == 0 ? 0.0 : signed_omega(k, params);
    for (int n = 0; n < np; ++n) {
      const cplx t = xi * phase(k, n, np) / root;
      ps.y[n] += t;
      ps.ydot[n] += cplx(0.0, w) * t;
    }
  }
  return ps;
}

cplx path_action(const std::vector<double>& v, const KineticFunction& z, const Background& bg,
                 const FlowParams& params) {
  const PathSample ps = sample_path(bg, params);
  return path_average(ps, 0, [&](cplx y, cplx yd) { return 0.5 * z.at(y) * yd * yd + poly_at(v, y); });
}

ABCForms assemble_ABC(const GeneralizedPotential& u, const KineticFunction& z,
                      const ModeVector& background, int m, const FlowParams& params) {
  if (m < 1) throw std::invalid_argument("assemble_ABC: m must be positive");
  const ModeVector bg = truncate(background, m - 1);
  const PathSample ps = sample_path(to_background(bg, params.n_slices), params);
  const double w = signed_omega(m, params);
  const double w2 = omega_sq(m, params);
  const cplx iw(0.0, w);

  ABCForms f;
  f.mass = path_average(ps, 0, [&](cplx y, cplx) { return z.at(y); });
  f.a = u.derivative_at({m, -m}, bg) +
        path_average(ps, 0, [&](cplx y, cplx yd) { return 0.5 * z.at(y, 2) * yd * yd; });
  f.b = u.derivative_at({m, m}, bg) +
        path_average(ps, 2 * m, [&](cplx y, cplx yd) {
          return 0.5 * z.at(y, 2) * yd * yd + 2.0 * iw * z.at(y, 1) * yd - w2 * z.at(y);
        });
  f.c = u.derivative_at({m}, bg) + path_average(ps, m, [&](cplx y, cplx yd) {
          return 0.5 * z.at(y, 1) * yd * yd + iw * z.at(y) * yd;
        });
  return f;
}

double action_step_with_Z(double s_m, const ABCForms& forms, int m, const FlowParams& params,
                          double guard) {
  const double mu = forms.mass.real() * omega_sq(m, params);
  const double d = mu + forms.a.real();
  const double g = d * d - std::norm(forms.b);
  if (!(g / (mu * mu) > guard)) throw ConvexityError(m, 0.0, g / (mu * mu));
  const double tree = (d * std::norm(forms.c) - (std::conj(forms.b) * forms.c * forms.c).real()) / g;
  return s_m + 0.5 * std::log(g / (mu * mu)) / params.beta - tree;
}

ZStep z_step_constant_background(const LocalData& d, int m, const FlowParams& params,
                                 ZFlowNormalization norm) {
  const double zw2 = d.z * omega_sq(m, params);
  const double den = zw2 + d.u_mm;
  if (!(den / zw2 > kLogGuard)) throw ConvexityError(m, 0.0, den / zw2);
  const double c = norm == ZFlowNormalization::Derived ? 1.0 / params.beta : 0.5 / params.beta;
  ZStep s;
  s.z = d.z + c * d.z_mm / den;
  s.u = d.u + std::log1p(d.u_mm / zw2) / params.beta;
  return s;
}

ZGeneralStep z_step_general(const KineticFunction& z, const GeneralizedPotential& u,
                            const ModeVector& background, int i, int j, int m,
                            const FlowParams& params, ZFlowNormalization norm) {
  if (std::abs(i) == m || std::abs(j) == m)
    throw std::invalid_argument("z_step_general: i, j must differ from +-m");
  const ModeVector bg = truncate(background, m - 1);
  const Background b = to_background(bg, params.n_slices);
  const PathSample ps = sample_path(b, params);
  const double w2 = omega_sq(m, params);
  auto zf = [&](int total, int r) {
    return path_average(ps, total, [&](cplx y, cplx) { return z.at(y, r); });
  };

  const double mass = zf(0, 0).real();
  const cplx umm = u.derivative_at({m, -m}, bg);
  const cplx dd = mass * w2 + umm;
  auto bsig = [&](int s) { return u.derivative_at({s * m, s * m}, bg) + zf(2 * s * m, 0) * w2; };
  const cplx g = dd * dd - std::norm(bsig(1));
  if (!(g.real() > kLogGuard)) throw ConvexityError(m, bg.x0, g.real());

  const int tot = i + j;
  const cplx first = zf(tot, 2) * dd / g;  // Z^{(m,-m)}_{i+j}
  auto part = [&](int s) {
    const int sm = s * m;
    // Z^{(a,b)}_k = avg Z'' e_{a+b+k}; d_j adds j to the index
    const cplx z2 = zf(tot - 2 * sm - 2 * sm, 2);
    const cplx djz1 = zf(j + sm + tot - 2 * sm, 2);
    const cplx djz0 = zf(j + 2 * sm, 1);
    const cplx dju = u.derivative_at({j, sm, sm}, bg);
    const cplx z1i = zf(sm + i - 2 * sm, 1);
    const cplx djz1i = zf(j + sm + i - 2 * sm, 2);
    const cplx bs = bsig(s);
    return ((z2 - djz1) * bs - ((djz0 * w2 + dju) * z1i + bs * djz1i)) / g;
  };
  const double perm_first = norm == ZFlowNormalization::Derived ? 2.0 : 1.0;
  ZGeneralStep r;
  r.increment = (perm_first * first - (part(1) + part(-1))) * (0.5 / params.beta);
  r.note = "source-term contribution omitted";
  return r;
}

double SymmetryResiduals::max() const {
  return std::max({r_plus_minus, r_real, r_conj, r_odd});
}

SymmetryResiduals symmetry_residuals(const KineticFunction& z, const ModeVector& background, int m,
                                     int k, const FlowParams& params) {
  const Background b = to_background(truncate(background, m - 1), params.n_slices);
  auto f = [&](int total, int r) { return z.fourier(b, total, r, params); };
  SymmetryResiduals s;
  s.r_plus_minus = std::abs(f(m + k, 1) - f(-m + k, 1));
  s.r_real = std::abs(f(m + k, 1).imag());
  s.r_conj = std::abs(f(2 * m + k, 2) - std::conj(f(-2 * m + k, 2)));
  s.r_odd = std::abs(f(m - 2 * m - k, 1) + f(m + 2 * m - k, 1));
  return s;
}

std::pair<PotentialGrid, PotentialGrid> run_continuum_coupled(const PotentialGrid& u0,
                                                              const PotentialGrid& z0, double lambda,
                                                              double delta_k,
                                                              const FlowParams& params,
                                                              ZFlowNormalization norm,
                                                              ShellRule rule) {
  if (!(lambda > 0.0) || !(delta_k > 0.0) || delta_k > lambda)
    throw std::invalid_argument("continuum flow needs 0 < delta_k <= Lambda");
  u0.validate();
  z0.validate();
  if (u0.n_points() != z0.n_points() || u0.x_min != z0.x_min || u0.x_max != z0.x_max)
    throw std::invalid_argument("continuum flow: U and Z grids differ");
  for (double v : z0.values)
    if (!(v > 0.0)) throw std::invalid_argument("continuum flow needs Z > 0");

  const long steps = std::lround(lambda / delta_k);
  const double pref = params.hbar * delta_k / (2.0 * std::numbers::pi);
  const double zpref = norm == ZFlowNormalization::Derived ? pref : 0.5 * pref;
  PotentialGrid u = u0;
  PotentialGrid z = z0;
  const int n = u.n_points();
  std::vector<double> u2(n), z2(n);
  for (long j = steps; j >= 1; --j) {
    const double k = rule == ShellRule::Midpoint ? (j - 0.5) * delta_k : j * delta_k;
    const double k2 = k * k;
    for (int i = 0; i < n; ++i) {
      u2[i] = second_derivative(u, i);
      const double arg = 1.0 + u2[i] / (z.values[i] * k2);
      if (!(arg > kLogGuard)) throw ConvexityError(static_cast<int>(j), u.x(i), arg);
    }
    for (int i = 0; i < n; ++i) u.values[i] += pref * std::log1p(u2[i] / (z.values[i] * k2));
    bool flat = true;
    for (int i = 0; i < n; ++i) {
      z2[i] = second_derivative(z, i);
      flat = flat && z2[i] == 0.0;
    }
    if (flat) continue;
    for (int i = 0; i < n; ++i) {
      const double den = z.values[i] * k2 + second_derivative(u, i);
      if (!(den > 0.0)) throw ConvexityError(static_cast<int>(j), u.x(i), den);
      u2[i] = den;
    }
    for (int i = 0; i < n; ++i) z.values[i] += zpref * z2[i] / u2[i];
  }
  return {u, z};
}

cplx kinetic_brute_force_step(const std::vector<double>& v, const KineticFunction& z,
                              const Background& bg, int m, double beta_loop,
                              const FlowParams& params, const QuadratureSpec& q) {
  const Background base = below(bg, m);
  const PathSample ps = sample_path(base, params);
  const int np = params.n_points();
  const double root = std::sqrt(static_cast<double>(np));
  const double w = signed_omega(m, params);

  std::vector<cplx> e(np);
  for (int n = 0; n < np; ++n) e[n] = phase(m, n, np);
  auto action = [&](cplx x, cplx xbar) {
    cplx s = 0.0;
    for (int n = 0; n < np; ++n) {
      const cplx fwd = x * e[n] / root;
      const cplx bwd = xbar * std::conj(e[n]) / root;
      const cplx y = ps.y[n] + fwd + bwd;
      const cplx yd = ps.ydot[n] + cplx(0.0, w) * (fwd - bwd);
      s += 0.5 * z.at(y) * yd * yd + poly_at(v, y);
    }
    return s / static_cast<double>(np);
  };

  const cplx w0 = action(0.0, 0.0);
  const cplx mu = path_average(ps, 0, [&](cplx y, cplx) { return z.at(y); }) * omega_sq(m, params);
  const double mu_r = mu.real();
  if (!(mu_r > 0.0)) throw ConvexityError(m, 0.0, mu_r);
  const double scale = std::sqrt(np / (beta_loop * mu_r));
  auto s = [&](double z1, double z2) {
    return beta_loop * (action(scale * cplx(z1, z2), scale * cplx(z1, -z2)) - w0);
  };
  return w0 + (log_mode_integral(s, q) - std::log(mu / mu_r)) / beta_loop;
}

KineticOracle kinetic_oracle_constant_background(const std::vector<double>& v,
                                                 const KineticFunction& z, double x0, int m,
                                                 int p1, int p2, const FlowParams& params,
                                                 const OracleSpec& spec) {
  if (p1 == p2 || p1 < 1 || p2 < 1 || p1 >= m || p2 >= m)
    throw std::invalid_argument("kinetic oracle: need distinct probe modes below m");
  const int np = params.n_points();
  const int pts = spec.points;
  const double r = spec.radius_y;
  const double dphi = 2.0 * std::numbers::pi / pts;
  std::vector<cplx> loop(2 * pts);
  parallel_for(loop.size(), [&](std::size_t idx) {
    const int p = idx < static_cast<std::size_t>(pts) ? p1 : p2;
    const int a = static_cast<int>(idx % pts);
    Background bg{{0, std::sqrt(static_cast<double>(np)) * x0},
                  {p, std::polar(r, a * dphi)},
                  {-p, cplx(r)}};
    const BetaExpansion ex = richardson_in_beta(
        [&](double b) { return kinetic_brute_force_step(v, z, bg, m, b, params, spec.quad); },
        100.0, spec.levels);
    loop[idx] = ex.loop;
  });

  auto first_harmonic = [&](int off) {
    cplx s = 0.0;
    for (int a = 0; a < pts; ++a) s += loop[off + a] * std::polar(1.0, -a * dphi);
    return (s / static_cast<double>(pts) / (r * r)).real();
  };
  cplx mean = 0.0;
  for (int a = 0; a < pts; ++a) mean += loop[a];

  const double l1 = first_harmonic(0) * np;
  const double l2 = first_harmonic(pts) * np;
  const double w1 = omega_sq(p1, params);
  const double w2 = omega_sq(p2, params);
  KineticOracle o;
  o.u = (mean / static_cast<double>(pts)).real();
  o.z = (l1 - l2) / (w1 - w2);
  o.u2 = l1 - o.z * w1;
  return o;
}

}  // namespace rgqm
