#include "rgqm/continuum_artifact.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rgqm/coupling_flow.hpp"
#include "rgqm/errors.hpp"
#include "rgqm/generalized_flow.hpp"
#include "rgqm/parallel.hpp"

namespace rgqm {

namespace {

struct Interval {
  double lo;
  double hi;
};

CouplingTable probe_table(const DiscreteProbe& p, double u3) {
  return CouplingTable::from_taylor({0.0, 0.0, p.u2, u3, p.u4}, p.m, 4);
}

void check_probe(const DiscreteProbe& p, const FlowParams& params) {
  if (p.n_slices != params.n_slices) throw std::invalid_argument("f_q_discrete: N mismatch");
  if (p.m < 2 || p.m > params.top_mode()) throw std::invalid_argument("f_q_discrete: bad m");
  if (p.q < 1 || p.q >= p.m) throw std::invalid_argument("f_q_discrete: need 1 <= q < m");
}

}  // namespace

void ShellSpec::validate() const {
  if (!(k > 0.0) || !(delta_k > 0.0) || !(delta_k < k))
    throw std::invalid_argument("ShellSpec: need 0 < delta_k < k");
  if (!(q >= 0.0)) throw std::invalid_argument("ShellSpec: q must be >= 0");
  if (!(g(k - 0.5 * delta_k) > 0.0) || !(g(k + 0.5 * delta_k) > 0.0))
    throw std::invalid_argument("ShellSpec: G must be positive on the shell");
}

double f_q_analytic(const ShellSpec& s) {
  s.validate();
  const double aq = std::abs(s.q);
  if (aq >= s.delta_k) return 0.0;
  const double g = s.g(s.k);
  return s.u3 * s.u3 * (s.delta_k - aq) / (2.0 * g * g);
}

double f_q_shell_quadrature(const ShellSpec& s) {
  s.validate();
  const double a = s.k - 0.5 * s.delta_k;
  const double b = s.k + 0.5 * s.delta_k;
  const Interval shell[2] = {{a, b}, {-b, -a}};
  const double kappa = s.u3 * s.u3 / 16.0;

  double total = 0.0;
  for (double sign : {1.0, -1.0}) {
    const double c = sign * s.q;  // p + p' = c
    for (const auto& ip : shell)
      for (const auto& jp : shell) {
        // p in ip and c - p in jp
        const double lo = std::max(ip.lo, c - jp.hi);
        const double hi = std::min(ip.hi, c - jp.lo);
        if (!(hi > lo)) continue;
        // on [0, 1]: the error estimate has an absolute floor
        const double len = hi - lo;
        double err = 0.0;
        double l1 = 0.0;
        const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            [&](double t) {
              const double p = lo + t * len;
              return 1.0 / (s.g(p) * s.g(c - p));
            },
            0.0, 1.0, 10, 1e-13, &err, &l1);
        if (l1 > 0.0 && err / l1 > 1e-10)
          throw QuadratureNonConvergence("shell integral did not converge", err / l1);
        total += v * len;
      }
  }
  return 2.0 * kappa * total;  // + h.c.
}

double f_q_discrete(const DiscreteProbe& probe, const FlowParams& params) {
  check_probe(probe, params);
  const std::vector<int> tup{-probe.q, probe.q};
  const double with = full_table_step(probe_table(probe, probe.u3), probe.m, params).get(tup);
  const double without = full_table_step(probe_table(probe, 0.0), probe.m, params).get(tup);
  return with - without;
}

double f_q_discrete_oracle(const DiscreteProbe& probe, const FlowParams& params,
                           const OracleSpec& spec) {
  check_probe(probe, params);
  const double mu = params.mass * omega_sq(probe.m, params);
  const int pts = spec.points;
  const double r = spec.radius_y;
  const double dphi = 2.0 * std::numbers::pi / pts;
  const CouplingTable tables[2] = {probe_table(probe, probe.u3), probe_table(probe, 0.0)};
  std::vector<std::complex<double>> vals(2 * pts);
  parallel_for(vals.size(), [&](std::size_t idx) {
    const CouplingTable& t = tables[idx / pts];
    const int a = static_cast<int>(idx % pts);
    const Background bg{{probe.q, std::polar(r, a * dphi)}, {-probe.q, std::complex<double>(r)}};
    const ModeSlice slice = slice_from_table(t, bg, probe.m, params.n_slices);
    const BetaExpansion e = richardson_in_beta(
        [&](double b) { return brute_force_step(slice, mu, params.n_slices, b, spec.quad); },
        params.beta, spec.levels);
    vals[idx] = e.at(params.beta);
  });
  std::complex<double> h[2] = {0.0, 0.0};
  for (int w = 0; w < 2; ++w)
    for (int a = 0; a < pts; ++a) h[w] += vals[w * pts + a] * std::polar(1.0, -a * dphi);
  const double scale = (params.n_slices + 1.0) / (pts * r * r);
  return ((h[0] - h[1]) * scale).real();
}

std::vector<FqRow> fq_table(ShellSpec s, double q_max, int n, const DiscreteProbe& probe,
                            const FlowParams& params) {
  if (n < 1) throw std::invalid_argument("fq_table: need n >= 1");
  const double disc = f_q_discrete(probe, params);
  std::vector<FqRow> rows(n + 1);
  parallel_for(rows.size(), [&](std::size_t i) {
    ShellSpec si = s;
    si.q = q_max * static_cast<double>(i) / n;
    rows[i] = {si.q, f_q_analytic(si), f_q_shell_quadrature(si), disc};
  });
  return rows;
}

KinkEstimate kink_at_delta_k(ShellSpec s, double h) {
  auto f = [&](double q) {
    s.q = q;
    return f_q_shell_quadrature(s);
  };
  const double d = s.delta_k;
  KinkEstimate k;
  k.slope_below = (f(d - h) - f(d - 2.0 * h)) / h;
  k.slope_above = (f(d + 2.0 * h) - f(d + h)) / h;
  return k;
}

}  // namespace rgqm
