#include "rgqm/brute_force.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rgqm/errors.hpp"
#include "rgqm/parallel.hpp"

namespace rgqm {

namespace {

using cplx = std::complex<double>;
using boost::math::quadrature::gauss_kronrod;

struct Minimum {
  double z1 = 0.0;
  double z2 = 0.0;
  double curvature = 1.0;  // smallest eigenvalue of Hess(Re s)/2
};

Minimum locate_minimum(const std::function<cplx(double, double)>& s) {
  auto f = [&](double a, double b) { return s(a, b).real(); };
  const double h = 1e-3;
  Eigen::Vector2d z(0.0, 0.0);
  Eigen::Matrix2d hess;
  for (int it = 0; it < 200; ++it) {
    const double f0 = f(z(0), z(1));
    const double fp1 = f(z(0) + h, z(1)), fm1 = f(z(0) - h, z(1));
    const double fp2 = f(z(0), z(1) + h), fm2 = f(z(0), z(1) - h);
    Eigen::Vector2d g((fp1 - fm1) / (2 * h), (fp2 - fm2) / (2 * h));
    hess(0, 0) = (fp1 - 2 * f0 + fm1) / (h * h);
    hess(1, 1) = (fp2 - 2 * f0 + fm2) / (h * h);
    hess(0, 1) = hess(1, 0) = (f(z(0) + h, z(1) + h) - f(z(0) + h, z(1) - h) -
                               f(z(0) - h, z(1) + h) + f(z(0) - h, z(1) - h)) /
                              (4 * h * h);
    Eigen::Vector2d step;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(hess);
    if (es.eigenvalues()(0) > 1e-8)
      step = -hess.ldlt().solve(g);
    else
      step = -g;
    double t = 1.0;
    while (t > 1e-6 && f(z(0) + t * step(0), z(1) + t * step(1)) > f0 + 1e-14 * std::abs(f0)) t *= 0.5;
    z += t * step;
    if ((t * step).norm() < 1e-9) break;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(hess);
  Minimum m;
  m.z1 = z(0);
  m.z2 = z(1);
  m.curvature = std::max(0.5 * es.eigenvalues()(0), 1e-3);
  return m;
}

}  // namespace

cplx ModeSlice::operator()(cplx x, cplx xbar) const {
  cplx sum = 0.0;
  cplx pa = 1.0;
  for (std::size_t a = 0; a < c.size(); ++a) {
    cplx pb = 1.0;
    for (std::size_t b = 0; b < c[a].size(); ++b) {
      if (c[a][b] != 0.0) sum += c[a][b] * pa * pb;
      pb *= xbar;
    }
    pa *= x;
  }
  return sum;
}

ModeSlice slice_from_table(const CouplingTable& t, const Background& bg, int m, int n_slices) {
  ModeSlice s;
  const int deg = t.max_order;
  s.c.assign(deg + 1, std::vector<cplx>(deg + 1, 0.0));
  const double np = n_slices + 1.0;
  for (const auto& [tup, g] : t.entries) {
    int a = 0, b = 0;
    cplx w = g / std::pow(np, 0.5 * tup.size());
    std::map<int, int> counts;
    for (int k : tup) ++counts[k];
    for (const auto& [k, c] : counts) {
      for (int i = 2; i <= c; ++i) w /= static_cast<double>(i);
      if (k == m) {
        a = c;
      } else if (k == -m) {
        b = c;
      } else {
        auto it = bg.find(k);
        const cplx v = it == bg.end() ? cplx(0.0) : it->second;
        w *= std::pow(v, c);
      }
    }
    s.c[a][b] += w;
  }
  return s;
}

cplx log_mode_integral(const std::function<cplx(double, double)>& s, const QuadratureSpec& q) {
  const Minimum mn = locate_minimum(s);
  const double r = std::sqrt(q.exponent_cut / mn.curvature);
  const cplx s_min = s(mn.z1, mn.z2);
  double worst = 0.0;
  auto inner = [&](double z1) {
    double err = 0.0;
    double l1 = 0.0;
    const cplx v = gauss_kronrod<double, 61>::integrate(
        [&](double z2) { return std::exp(-(s(z1, z2) - s_min)); }, mn.z2 - r, mn.z2 + r,
        q.max_depth, q.tolerance, &err, &l1);
    if (l1 > 1e-300) worst = std::max(worst, err / l1);
    return v;
  };
  double err = 0.0;
  double l1 = 0.0;
  const cplx total =
      gauss_kronrod<double, 61>::integrate(inner, mn.z1 - r, mn.z1 + r, q.max_depth, q.tolerance, &err, &l1);
  const double rel = std::max(worst, l1 > 0 ? err / l1 : 1.0);
  if (!(rel <= q.fail_above)) throw QuadratureNonConvergence("mode integral did not converge", rel);
  return (s_min - s(0.0, 0.0)) - std::log(total / std::numbers::pi);
}

cplx brute_force_step(const ModeSlice& slice, double mu, int n_slices, double beta,
                      const QuadratureSpec& q) {
  const double scale = std::sqrt((n_slices + 1.0) / (beta * mu));
  const cplx u0 = slice(0.0, 0.0);
  auto s = [&](double z1, double z2) {
    const cplx x = scale * cplx(z1, z2);
    const cplx xbar = scale * cplx(z1, -z2);
    return cplx(z1 * z1 + z2 * z2) + beta * (slice(x, xbar) - u0);
  };
  return u0 + log_mode_integral(s, q) / beta;
}

BetaExpansion richardson_in_beta(const std::function<cplx(double)>& f, double beta0, int levels) {
  Eigen::MatrixXd v(levels, levels);
  Eigen::VectorXd re(levels), im(levels);
  for (int i = 0; i < levels; ++i) {
    const double b = beta0 * std::pow(2.0, i);
    const cplx val = f(b);
    re(i) = val.real();
    im(i) = val.imag();
    for (int j = 0; j < levels; ++j) v(i, j) = std::pow(1.0 / b, j);
  }
  const auto lu = v.fullPivLu();
  const Eigen::VectorXd cr = lu.solve(re);
  const Eigen::VectorXd ci = lu.solve(im);
  return {cplx(cr(0), ci(0)), cplx(cr(1), ci(1))};
}

std::vector<Background> cauchy_nodes(int m, int points, double radius0, double radius1) {
  if (m != 1 && m != 2) throw std::invalid_argument("cauchy extraction supports m = 1 or 2");
  std::vector<Background> nodes;
  const double dphi = 2.0 * std::numbers::pi / points;
  if (m == 1) {
    for (int a = 0; a < points; ++a) nodes.push_back({{0, std::polar(radius0, a * dphi)}});
    return nodes;
  }
  for (int a = 0; a < points; ++a)
    for (int b = 0; b < points; ++b)
      nodes.push_back({{-1, cplx(radius1)},
                       {0, std::polar(radius0, a * dphi)},
                       {1, std::polar(radius1, b * dphi)}});
  return nodes;
}

std::map<Monomial, cplx> cauchy_decode(const std::vector<cplx>& values, int m, int max_degree,
                                       int points, double radius0, double radius1) {
  std::map<Monomial, cplx> out;
  const double dphi = 2.0 * std::numbers::pi / points;
  if (m == 1) {
    for (int b0 = 0; b0 <= max_degree; ++b0) {
      cplx s = 0.0;
      for (int a = 0; a < points; ++a) s += values[a] * std::polar(1.0, -b0 * a * dphi);
      out[Monomial(b0, 0)] = s / static_cast<double>(points) / std::pow(radius0, b0);
    }
    return out;
  }
  for (int b0 = 0; b0 <= max_degree; ++b0)
    for (int c = 0; b0 + 2 * c <= max_degree; ++c) {
      cplx s = 0.0;
      for (int a = 0; a < points; ++a)
        for (int b = 0; b < points; ++b)
          s += values[a * points + b] * std::polar(1.0, -(b0 * a + c * b) * dphi);
      Monomial mono;
      mono.insert(mono.end(), c, -1);
      mono.insert(mono.end(), b0, 0);
      mono.insert(mono.end(), c, 1);
      out[mono] = s / static_cast<double>(points * points) /
                  (std::pow(radius0, b0) * std::pow(radius1, 2 * c));
    }
  return out;
}

std::map<Monomial, cplx> cauchy_coefficients(const std::function<cplx(const Background&)>& f, int m,
                                             int max_degree, int points, double radius0,
                                             double radius1) {
  const auto nodes = cauchy_nodes(m, points, radius0, radius1);
  std::vector<cplx> values;
  values.reserve(nodes.size());
  for (const auto& n : nodes) values.push_back(f(n));
  return cauchy_decode(values, m, max_degree, points, radius0, radius1);
}

std::map<Monomial, cplx> raw_to_couplings(const std::map<Monomial, cplx>& raw, int n_slices) {
  std::map<Monomial, cplx> out;
  for (const auto& [mono, c] : raw)
    out[mono] = c * multiplicity_factorial(mono) * std::pow(n_slices + 1.0, 0.5 * mono.size());
  return out;
}

double OracleCouplings::at(const Monomial& mono, double beta) const {
  auto t = tree.find(mono);
  auto l = loop.find(mono);
  const double a = t == tree.end() ? 0.0 : t->second.real();
  const double b = l == loop.end() ? 0.0 : l->second.real();
  return a + b / beta;
}

OracleCouplings oracle_step_couplings(const CouplingTable& t, int m, int n_slices, double mu,
                                      double beta0, const OracleSpec& spec) {
  const double r = spec.radius_y * std::sqrt(n_slices + 1.0);
  const auto nodes = cauchy_nodes(m, spec.points, r, r);
  std::vector<cplx> tree(nodes.size()), loop(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t i) {
    const ModeSlice s = slice_from_table(t, nodes[i], m, n_slices);
    const BetaExpansion e = richardson_in_beta(
        [&](double b) { return brute_force_step(s, mu, n_slices, b, spec.quad); }, beta0, spec.levels);
    tree[i] = e.tree;
    loop[i] = e.loop;
  });
  OracleCouplings out;
  out.tree = raw_to_couplings(cauchy_decode(tree, m, t.max_order, spec.points, r, r), n_slices);
  out.loop = raw_to_couplings(cauchy_decode(loop, m, t.max_order, spec.points, r, r), n_slices);
  return out;
}

}  // namespace rgqm
