#include <cmath>
#include <stdexcept>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "rgqm/errors.hpp"
#include "rgqm/kinetic_flow.hpp"
#include "rgqm/lpa_flow.hpp"

using namespace rgqm;

namespace {

using cplx = std::complex<double>;

std::vector<double> taylor_of(const std::vector<double>& a, int order) {
  std::vector<double> d(order + 1, 0.0);
  double f = 1.0;
  for (int n = 0; n <= order; ++n) {
    if (n > 0) f *= n;
    if (n < static_cast<int>(a.size())) d[n] = a[n] * f;
  }
  return d;
}

double second_diff(const std::function<double(double)>& f, double h = 1e-3) {
  auto c = [&](double hh) { return (f(hh) - 2.0 * f(0.0) + f(-hh)) / (hh * hh); };
  return (4.0 * c(0.5 * h) - c(h)) / 3.0;
}

double first_diff(const std::function<double(double)>& f, double h = 1e-3) {
  auto c = [&](double hh) { return (f(hh) - f(-hh)) / (2.0 * hh); };
  return (4.0 * c(0.5 * h) - c(h)) / 3.0;
}

}  // namespace

TEST_CASE("KineticFunction values and Fourier data") {
  const KineticFunction z({1.0, 0.2, 0.1});
  CHECK(z.at(0.5) == doctest::Approx(1.0 + 0.1 + 0.025));
  CHECK(z.at(0.5, 1) == doctest::Approx(0.2 + 0.1));
  CHECK(z.at(0.5, 2) == doctest::Approx(0.2));
  CHECK(z.at(0.5, 3) == 0.0);
  CHECK_FALSE(z.is_constant());
  CHECK(KineticFunction::constant(2.0).is_constant());
  const auto p = FlowParams::from_beta(10, 5.0);
  const Background c{{0, std::sqrt(11.0) * 0.3}};
  CHECK(z.fourier(c, 0, 0, p).real() == doctest::Approx(z.at(0.3)).epsilon(1e-14));
  CHECK(std::abs(z.fourier(c, 3, 0, p)) < 1e-14);
  CHECK(z.mass(c, p).real() == doctest::Approx(z.at(0.3)).epsilon(1e-14));
}

TEST_CASE("path action: constant Z reproduces Z w_k^2 |x_k|^2") {
  const auto p = FlowParams::from_beta(10, 5.0);
  const auto bg = to_background(ModeVector{0.2, {{0.3, 0.1}, {0.0, 0.2}}}, 10);
  const cplx w = path_action({}, KineticFunction::constant(1.5), bg, p);
  const double expect = 1.5 * (omega_sq(1, p) * 0.1 + omega_sq(2, p) * 0.04) / 11.0;
  CHECK(w.real() == doctest::Approx(expect).epsilon(1e-13));
  CHECK(std::abs(w.imag()) < 1e-14);
}

TEST_CASE("assemble_ABC") {
  const auto p = FlowParams::from_beta(16, 4.0);
  const int m = 3;
  const std::vector<double> v{0.0, 0.1, 0.5, 0.2, 0.05};
  const auto u = GeneralizedPotential::from_table(CouplingTable::from_taylor(taylor_of(v, 4), m, 4), 16);
  const ModeVector bg{0.3, {{0.2, 0.1}, {0.1, -0.15}}};

  SUBCASE("constant Z gives the U derivatives") {
    const auto f = assemble_ABC(u, KineticFunction::constant(1.0), bg, m, p);
    CHECK(std::abs(f.a - u.derivative_at({m, -m}, bg)) < 1e-13);
    CHECK(std::abs(f.b - u.derivative_at({m, m}, bg)) < 1e-12);
    CHECK(std::abs(f.c - u.derivative_at({m}, bg)) < 1e-13);
    CHECK(f.mass.real() == 1.0);
  }
  SUBCASE("U = 0, constant Z, constant background") {
    CouplingTable empty;
    empty.cutoff = m;
    const auto f = assemble_ABC(GeneralizedPotential::from_table(empty, 16), KineticFunction::constant(1.0),
                                ModeVector{0.4, {}}, m, p);
    CHECK(std::abs(f.a) == 0.0);
    CHECK(std::abs(f.b) < 1e-12);
    CHECK(std::abs(f.c) == 0.0);
  }
  SUBCASE("Z = 1 + 0.1 x^2 against finite differences of the path action") {
    const KineticFunction z({1.0, 0.0, 0.1});
    const auto f = assemble_ABC(u, z, bg, m, p);
    const auto base = to_background(bg, 16);
    auto along = [&](double theta) {
      return [&, theta](double s) {
        Background b = base;
        b[m] = std::polar(s, theta);
        b[-m] = std::polar(s, -theta);
        return path_action(v, z, b, p).real();
      };
    };
    const double np = 17.0;
    const double mu = f.mass.real() * omega_sq(m, p);
    // W''(theta) = (2/(N+1)) (mu + A + Re(B e^{2 i theta}))
    const double f0 = 0.5 * np * second_diff(along(0.0));
    const double f90 = 0.5 * np * second_diff(along(0.5 * std::numbers::pi));
    const double f45 = 0.5 * np * second_diff(along(0.25 * std::numbers::pi));
    const double a = 0.5 * (f0 + f90) - mu;
    CHECK(f.a.real() == doctest::Approx(a).epsilon(1e-8));
    CHECK(f.b.real() == doctest::Approx(0.5 * (f0 - f90)).epsilon(1e-8));
    CHECK(-f.b.imag() == doctest::Approx(f45 - mu - a).epsilon(1e-8));
    // W'(theta) = (2/sqrt(N+1)) Re(C e^{i theta})
    CHECK(f.c.real() == doctest::Approx(0.5 * std::sqrt(np) * first_diff(along(0.0))).epsilon(1e-8));
    CHECK(-f.c.imag() ==
          doctest::Approx(0.5 * std::sqrt(np) * first_diff(along(0.5 * std::numbers::pi))).epsilon(1e-8));
  }
}

TEST_CASE("constant Z never moves") {
  const auto p = FlowParams::from_beta(16, 4.0);
  const int m = 4;
  const KineticFunction z = KineticFunction::constant(1.3);
  const auto u = GeneralizedPotential::from_table(CouplingTable::from_taylor({0.0, 0.0, 1.0, 0.4, 0.6}, m, 4), 16);
  const ModeVector bg{0.2, {{0.1, 0.05}, {0.2, 0.0}, {0.0, -0.1}}};
  for (int i = -3; i <= 3; ++i)
    for (int j = -3; j <= 3; ++j) CHECK(z_step_general(z, u, bg, i, j, m, p).increment == cplx(0.0));
  for (auto norm : {ZFlowNormalization::Derived, ZFlowNormalization::AsPrinted}) {
    const ZStep s = z_step_constant_background({1.3, 0.0, 0.2, 0.9}, m, p, norm);
    CHECK(s.z == 1.3);
  }
  const auto u0 = PotentialGrid::sample([](double x) { return 0.5 * x * x + 0.05 * std::pow(x, 4); }, -3, 3, 61);
  const auto z0 = PotentialGrid::sample([](double) { return 1.3; }, -3, 3, 61);
  const auto [uu, zz] = run_continuum_coupled(u0, z0, 20.0, 0.01, p);
  CHECK(zz.values == z0.values);
  const auto lpa = run_continuum_lpa(u0, 1.3, 20.0, 0.01, p);
  CHECK(uu.values == lpa.values);
}

TEST_CASE("reduction chain") {
  const auto p = FlowParams::from_beta(12, 4.0);
  const int m = 5;
  const double x0 = 0.35;
  const std::vector<double> v{0.0, 0.0, 0.5, 0.1, 0.08};
  const KineticFunction z({1.0, 0.0, 0.15});
  const auto u = GeneralizedPotential::from_table(CouplingTable::from_taylor(taylor_of(v, 4), m, 4), 12);
  const double v2 = 2 * v[2] + 6 * v[3] * x0 + 12 * v[4] * x0 * x0;
  const LocalData d{z.at(x0), z.at(x0, 2), 0.0, v2};
  for (auto norm : {ZFlowNormalization::Derived, ZFlowNormalization::AsPrinted}) {
    const ZStep s = z_step_constant_background(d, m, p, norm);
    const auto g = z_step_general(z, u, ModeVector{x0, {}}, 0, 0, m, p, norm);
    CHECK(g.source_term_omitted);
    CHECK(g.increment.real() == doctest::Approx(s.z - d.z).epsilon(1e-12));
    CHECK(std::abs(g.increment.imag()) < 1e-14);
  }
  const ZStep derived = z_step_constant_background(d, m, p, ZFlowNormalization::Derived);
  const ZStep printed = z_step_constant_background(d, m, p, ZFlowNormalization::AsPrinted);
  CHECK(derived.z - d.z == doctest::Approx(2.0 * (printed.z - d.z)).epsilon(1e-14));
  CHECK(derived.z - d.z ==
        doctest::Approx(d.z_mm / (d.z * omega_sq(m, p) + v2) / p.beta).epsilon(1e-14));

  // constant Z: the U increment is the LPA step
  const LocalData flat{1.0, 0.0, 0.0, v2};
  const ZStep s = z_step_constant_background(flat, m, p);
  auto grid = PotentialGrid::sample([&](double x) { return 0.5 * v2 * x * x; }, -1, 1, 21);
  const auto stepped = lpa_step(grid, m, p);
  CHECK(s.u == doctest::Approx(stepped.values[10] - grid.values[10]).epsilon(1e-12));

  CHECK(z_step_constant_background({1.0, 1.0, 0.0, 1.0}, m, p).z - 1.0 ==
        doctest::Approx(1.0 / (omega_sq(m, p) + 1.0) / p.beta).epsilon(1e-14));
}

TEST_CASE("Z flow against brute-force mode integration") {
  // N = 10, m = 3, probes 1 and 2: no index sum can wrap around the 11 slices
  const auto p = FlowParams::from_epsilon(10, 1.5);
  const std::vector<double> v{0.0, 0.0, 0.5, 0.0, 0.3 / 24.0};
  const KineticFunction z({1.0, 0.0, 0.1});
  const double x0 = 0.4;
  const int m = 3;
  const auto oracle = kinetic_oracle_constant_background(v, z, x0, m, 1, 2, p);
  const double v2 = 1.0 + 0.15 * x0 * x0;
  const LocalData d{z.at(x0), z.at(x0, 2), 0.0, v2};
  const ZStep derived = z_step_constant_background(d, m, p);
  const ZStep printed = z_step_constant_background(d, m, p, ZFlowNormalization::AsPrinted);
  CHECK(p.beta * (derived.z - d.z) == doctest::Approx(oracle.z).epsilon(1e-6));
  CHECK(std::abs(p.beta * (printed.z - d.z) - oracle.z) > 1e-3);
  CHECK(p.beta * derived.u == doctest::Approx(oracle.u).epsilon(1e-6));
  // U'' picks up -Z''/Z from the measure
  const double w2 = omega_sq(m, p);
  const double u2 = (d.z_mm * w2 + 0.3) / (d.z * w2 + v2) - d.z_mm / d.z;
  CHECK(u2 == doctest::Approx(oracle.u2).epsilon(1e-6));
}

TEST_CASE("action step with Z against brute force") {
  const auto p = FlowParams::from_epsilon(10, 1.5);
  const int m = 3;
  const std::vector<double> v{0.0, 0.0, 0.5, 0.1, 0.3 / 24.0};
  const KineticFunction z({1.0, 0.0, 0.1});
  const auto u = GeneralizedPotential::from_table(CouplingTable::from_taylor(taylor_of(v, 4), m, 4), 10);
  for (const ModeVector& bg : {ModeVector{0.4, {}}, ModeVector{0.3, {{0.02, 0.01}}}}) {
    const Background b = to_background(bg, 10);
    const cplx w0 = path_action(v, z, b, p);
    const auto forms = assemble_ABC(u, z, bg, m, p);
    const double formula = action_step_with_Z(w0.real(), forms, m, p);
    const BetaExpansion ex = richardson_in_beta(
        [&](double beta) { return kinetic_brute_force_step(v, z, b, m, beta, p); }, 100.0, 4);
    CHECK(ex.at(p.beta).real() == doctest::Approx(formula).epsilon(1e-6));
  }
  ABCForms pure{0.3, 0.0, 0.0, 1.0};
  CHECK(action_step_with_Z(0.1, pure, m, p) ==
        doctest::Approx(0.1 + std::log1p(0.3 / omega_sq(m, p)) / p.beta).epsilon(1e-14));
}

TEST_CASE("symmetry relations at a constant background") {
  const auto p = FlowParams::from_beta(16, 4.0);
  const KineticFunction z({1.0, 0.1, 0.2, 0.0, 0.05});
  for (int k = -2; k <= 2; ++k) CHECK(symmetry_residuals(z, ModeVector{0.3, {}}, 4, k, p).max() < 1e-14);
}

TEST_CASE("continuum coupled flow") {
  const auto p = FlowParams::from_beta(64, 10.0);
  SUBCASE("harmonic with Z = 1") {
    const auto u0 = PotentialGrid::sample([](double x) { return 0.5 * x * x; }, -4, 4, 81);
    const auto z0 = PotentialGrid::sample([](double) { return 1.0; }, -4, 4, 81);
    const auto [u, zz] = run_continuum_coupled(u0, z0, 200.0, 200.0 / (1 << 16), p);
    CHECK(u.value_at(0.0) == doctest::Approx(0.5).epsilon(1e-3));
  }
  SUBCASE("positive Z'' keeps Z growing and positive; halving dk changes little") {
    const auto u0 = PotentialGrid::sample([](double x) { return 0.5 * x * x; }, -2, 2, 41);
    const auto z0 = PotentialGrid::sample([](double x) { return 1.0 + 0.1 * x * x; }, -2, 2, 41);
    const auto [u1, z1] = run_continuum_coupled(u0, z0, 20.0, 2e-2, p);
    const auto [u2, z2] = run_continuum_coupled(u0, z0, 20.0, 1e-2, p);
    for (int i = 0; i < z0.n_points(); ++i) {
      CHECK(z1.values[i] >= z0.values[i]);
      CHECK(z1.values[i] > 0.0);
      CHECK(std::abs(z1.values[i] - z2.values[i]) < 1e-4);
    }
  }
  SUBCASE("input checks") {
    const auto g = PotentialGrid::sample([](double) { return 0.0; }, -1, 1, 11);
    const auto bad = PotentialGrid::sample([](double) { return -1.0; }, -1, 1, 11);
    CHECK_THROWS_AS(run_continuum_coupled(g, bad, 1.0, 0.1, p), std::invalid_argument);
  }
}
