#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <numbers>

#include "doctest.h"
#include "rgqm/errors.hpp"
#include "rgqm/lpa_flow.hpp"
#include "rgqm/spectrum_oracle.hpp"

using namespace rgqm;

namespace {

PotentialGrid harmonic_grid(double w = 1.0, double lo = -4.0, double hi = 4.0, int n = 81) {
  return PotentialGrid::sample([w](double x) { return 0.5 * w * w * x * x; }, lo, hi, n);
}

// Free energy of the discretized harmonic oscillator from the eigenvalues of the ring
// (1/2 beta) sum_k log(lambda_k + eps^2 W^2), with M = hbar = 1.
double lattice_harmonic_free_energy(const FlowParams& p, double w) {
  const int np = p.n_points();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(np, np);
  for (int i = 0; i < np; ++i) {
    k(i, i) += 2.0 + p.epsilon * p.epsilon * w * w;
    k(i, (i + 1) % np) -= 1.0;
    k((i + 1) % np, i) -= 1.0;
  }
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(k).eigenvalues();
  double s = 0.0;
  for (int i = 0; i < np; ++i) s += std::log(ev(i));
  return s / (2.0 * p.beta);
}

}  // namespace

TEST_CASE("second_derivative") {
  SUBCASE("exact on quadratics, boundaries included") {
    for (auto scheme : {DerivScheme::CentralDifference, DerivScheme::PolyFit}) {
      const auto g = PotentialGrid::sample([](double x) { return x * x; }, -1.0, 2.0, 31, scheme);
      for (int i = 0; i < g.n_points(); ++i) CHECK(second_derivative(g, i) == doctest::Approx(2.0).epsilon(1e-10));
      const auto c = PotentialGrid::sample([](double) { return 3.0; }, -1.0, 2.0, 31, scheme);
      for (int i = 0; i < c.n_points(); ++i) CHECK(std::abs(second_derivative(c, i)) < 1e-12);
    }
  }
  SUBCASE("x^4 at x = 1") {
    const auto g = PotentialGrid::sample([](double x) { return std::pow(x, 4); }, 0.0, 2.0, 201);
    CHECK(second_derivative(g, 100) == doctest::Approx(12.0).epsilon(1e-4));
    auto f = g;
    f.deriv_scheme = DerivScheme::PolyFit;
    CHECK(second_derivative(f, 100) == doctest::Approx(12.0).epsilon(1e-8));
  }
}

TEST_CASE("lpa_step: single-step examples") {
  // M w_1^2 = 1 with beta = 10
  auto p = FlowParams::from_beta(4, 10.0);
  p.mass = 1.0 / omega_sq(1, p);
  const auto g = harmonic_grid();
  const auto out = lpa_step(g, 1, p);
  for (int i = 0; i < g.n_points(); ++i)
    CHECK(out.values[i] - g.values[i] == doctest::Approx(std::log(2.0) / 10.0).epsilon(1e-10));

  const auto zero = PotentialGrid::sample([](double) { return 0.0; }, -1, 1, 11);
  CHECK(lpa_step(zero, 2, p).values == zero.values);
}

TEST_CASE("lpa_step: shift covariance, monotone stacking, quadratic closure") {
  const auto p = FlowParams::from_beta(64, 8.0);
  const auto v = PotentialGrid::sample([](double x) { return 0.5 * x * x + 0.1 * std::pow(x, 4); }, -3, 3, 61);
  auto shifted = v;
  for (double& y : shifted.values) y += 2.5;
  for (int m : {1, 7, 32}) {
    const auto a = lpa_step(v, m, p);
    const auto b = lpa_step(shifted, m, p);
    for (int i = 0; i < v.n_points(); ++i) {
      CHECK(b.values[i] - 2.5 == doctest::Approx(a.values[i]).epsilon(1e-13));
      CHECK(a.values[i] >= v.values[i]);
    }
  }
  const auto q = PotentialGrid::sample([](double x) { return 0.3 + 0.7 * x * x; }, -3, 3, 61);
  const auto r = lpa_step(q, 3, p);
  for (int i = 0; i < q.n_points(); ++i)
    CHECK(second_derivative(r, i) == doctest::Approx(1.4).epsilon(1e-9));
}

TEST_CASE("harmonic flow equals the lattice determinant") {
  for (double w : {0.7, 1.0, 2.0}) {
    const auto p = FlowParams::from_beta(64, 8.0);
    const auto [v0, trace] = run_lpa_flow(harmonic_grid(w), p);
    CHECK(trace.completed);
    REQUIRE(trace.steps.size() == 32);
    for (std::size_t s = 1; s < trace.steps.size(); ++s) CHECK(trace.steps[s].m < trace.steps[s - 1].m);
    CHECK(zero_mode_free_energy(v0, p) == doctest::Approx(lattice_harmonic_free_energy(p, w)).epsilon(1e-10));
    // quadratic part untouched along the whole flow
    for (const auto& st : trace.steps) CHECK(st.v2_at_zero == doctest::Approx(w * w).epsilon(1e-9));
  }
}

TEST_CASE("harmonic ground state at large N") {
  const auto p = FlowParams::from_beta(4096, 60.0);
  const auto [v0, trace] = run_lpa_flow(harmonic_grid(), p);
  CHECK(trace.warnings.empty());
  // the zero-mode integral is what brings V0(0) up to 1/2
  CHECK(zero_mode_free_energy(v0, p) == doctest::Approx(0.5).epsilon(2e-3));
  const double gap = std::log(p.beta) / p.beta;
  CHECK(std::abs(v0.value_at(0.0) + gap - 0.5) < 0.02);
}

TEST_CASE("V = 0 flows trivially") {
  const auto p = FlowParams::from_beta(16, 5.0);
  const auto zero = PotentialGrid::sample([](double) { return 0.0; }, -2, 2, 21);
  const auto [v0, trace] = run_lpa_flow(zero, p);
  CHECK(trace.steps.size() == 8);
  CHECK(v0.values == zero.values);
}

TEST_CASE("convexity loss raises with the partial trace") {
  const auto p = FlowParams::from_beta(256, 30.0);
  const auto dw = PotentialGrid::sample([](double x) { return -x * x + 0.25 * std::pow(x, 4); }, -3, 3, 61);
  bool thrown = false;
  try {
    run_lpa_flow(dw, p);
  } catch (const ConvexityError& e) {
    thrown = true;
    REQUIRE(e.trace);
    CHECK(e.trace->halted);
    CHECK_FALSE(e.trace->completed);
    CHECK(std::abs(e.x0()) < 1.0);  // V'' < 0 only for |x| < sqrt(2/3)
    CHECK(omega_sq(e.m(), p) <= 2.0 + 1e-9);
    CHECK(static_cast<int>(e.trace->steps.size()) == p.top_mode() - e.m());
  }
  CHECK(thrown);
}

TEST_CASE("checkerboard growth flags over-fine grids") {
  const auto p = FlowParams::from_beta(256, 20.0);
  CHECK(checkerboard_growth(harmonic_grid(1.0, -6, 6, 1201), p) > 8.0);
  CHECK(checkerboard_growth(harmonic_grid(), p) < 8.0);
}

TEST_CASE("ground_state_energy") {
  const auto g = PotentialGrid::sample([](double x) { return 0.5 + x * x; }, -2, 2, 41);
  const auto gs = ground_state_energy(g);
  CHECK(gs.energy == doctest::Approx(0.5));
  REQUIRE(gs.minimizers.size() == 1);
  CHECK(std::abs(gs.minimizers[0]) < 1e-12);
  CHECK_FALSE(gs.boundary_minimizer);

  const auto dw = PotentialGrid::sample([](double x) { return std::pow(x * x - 1.0, 2); }, -2, 2, 41);
  const auto d = ground_state_energy(dw);
  REQUIRE(d.minimizers.size() == 2);
  CHECK(d.minimizers[0] == doctest::Approx(-1.0));
  CHECK(d.minimizers[1] == doctest::Approx(1.0));

  const auto slope = PotentialGrid::sample([](double x) { return x; }, -2, 2, 41);
  CHECK(ground_state_energy(slope).boundary_minimizer);
}

TEST_CASE("continuum LPA") {
  const auto p = FlowParams::from_beta(64, 10.0);
  const double lambda = 200.0;
  SUBCASE("harmonic against the closed-form shell integral") {
    // int_0^L dk/2pi log(1 + 1/k^2)
    const double exact = (lambda * std::log1p(1.0 / (lambda * lambda)) + 2.0 * std::atan(lambda)) /
                         (2.0 * std::numbers::pi);
    double err[2];
    for (int r = 0; r < 2; ++r) {
      const long n = 1L << (12 + r);
      const double dk = lambda / n;
      const auto u = run_continuum_lpa(harmonic_grid(), 1.0, lambda, dk, p);
      long double direct = 0.0L;
      for (long j = 1; j <= n; ++j) {
        const long double k = (j - 0.5L) * dk;
        direct += std::log1p(1.0L / (k * k));
      }
      direct *= dk / (2.0L * std::numbers::pi_v<long double>);
      CHECK(u.value_at(0.0) == doctest::Approx(static_cast<double>(direct)).epsilon(1e-11));
      err[r] = exact - u.value_at(0.0);
      CHECK(err[r] > 0.0);
    }
    // the log singularity at k = 0 makes the midpoint rule first order
    CHECK(err[0] / err[1] == doctest::Approx(2.0).epsilon(0.02));
  }
  SUBCASE("V = 0 unchanged") {
    const auto zero = PotentialGrid::sample([](double) { return 0.0; }, -2, 2, 21);
    CHECK(run_continuum_lpa(zero, 1.0, 10.0, 0.01, p).values == zero.values);
  }
  SUBCASE("discrete and continuum agree at matched cutoff") {
    const auto d = FlowParams::from_beta(4096, 60.0);
    const auto [v0, tr] = run_lpa_flow(harmonic_grid(), d);
    const double top = std::sqrt(omega_sq(d.top_mode(), d));
    const auto c = run_continuum_lpa(harmonic_grid(), 1.0, top, top / (1 << 14), d);
    CHECK(std::abs(zero_mode_free_energy(v0, d) - c.value_at(0.0)) < 5e-3);
  }
  SUBCASE("bad arguments") {
    CHECK_THROWS_AS(run_continuum_lpa(harmonic_grid(), 1.0, 1.0, 2.0, p), std::invalid_argument);
    CHECK_THROWS_AS(run_continuum_lpa(harmonic_grid(), 0.0, 1.0, 0.1, p), std::invalid_argument);
  }
}

TEST_CASE("anharmonic LPA against exact diagonalization") {
  const auto p = FlowParams::from_beta(4096, 60.0);
  auto v = [](double x) { return 0.5 * x * x + std::pow(x, 4) / 24.0; };
  const auto [v0, tr] = run_lpa_flow(PotentialGrid::sample(v, -4, 4, 81), p);
  const double e0 = diag_hermite({0.0, 0.0, 0.5, 0.0, 1.0 / 24.0}, 120, 1.0, p).e0;
  CHECK(zero_mode_free_energy(v0, p) == doctest::Approx(e0).epsilon(1e-2));
}
