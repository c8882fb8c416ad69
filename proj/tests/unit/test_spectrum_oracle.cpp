#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "rgqm/errors.hpp"
#include "rgqm/spectrum_oracle.hpp"

using namespace rgqm;

namespace {

const FlowParams unit = FlowParams::from_beta(16, 10.0);

}  // namespace

TEST_CASE("harmonic oscillator is exact") {
  for (double w : {1.0, 2.0}) {  // reference frequency 2 is a squeezed basis
    const auto r = diag_hermite({0.0, 0.0, 0.5}, 80, w, unit);
    CHECK(r.e0 == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(r.e1 == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(r.gap == doctest::Approx(1.0).epsilon(1e-10));
  }
  auto heavy = unit;
  heavy.mass = 4.0;
  // w = sqrt(k/M) = 1/2
  CHECK(diag_hermite({0.0, 0.0, 0.5}, 40, 0.5, heavy).gap == doctest::Approx(0.5).epsilon(1e-10));
  const auto g = diag_grid([](double x) { return 0.5 * x * x; }, -10.0, 10.0, 2000, unit);
  CHECK(g.e0 == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(g.e1 == doctest::Approx(1.5).epsilon(1e-6));
}

TEST_CASE("tabulated anharmonic levels") {
  // -d^2/dx^2 + x^2 + x^4 has E0 = 1.3923516415; halve for p^2/2 + x^2/2 + x^4/2
  CHECK(diag_hermite({0.0, 0.0, 0.5, 0.0, 0.5}, 120, 1.5, unit).e0 ==
        doctest::Approx(0.5 * 1.3923516415).epsilon(1e-9));
  // -d^2/dx^2 + x^4 has E0 = 1.0603620904
  CHECK(diag_hermite({0.0, 0.0, 0.0, 0.0, 0.5}, 200, 1.5, unit).e0 ==
        doctest::Approx(0.5 * 1.0603620904).epsilon(1e-9));
}

TEST_CASE("hermite and grid agree") {
  auto v = [](double x) { return 0.5 * x * x + std::pow(x, 4) / 24.0; };
  const auto h = diag_hermite({0.0, 0.0, 0.5, 0.0, 1.0 / 24.0}, 120, 1.0, unit);
  const auto g = diag_grid(v, -10.0, 10.0, 2000, unit);
  CHECK(h.e0 == doctest::Approx(g.e0).epsilon(1e-8));
  CHECK(h.gap == doctest::Approx(g.gap).epsilon(1e-8));

  // double well: two nearly degenerate levels, the grid gets them right too
  auto dw = [](double x) { return -x * x + 0.25 * std::pow(x, 4); };
  const auto d = diag_hermite({0.0, 0.0, -1.0, 0.0, 0.25}, 200, 2.0, unit);
  const auto dg = diag_grid(dw, -8.0, 8.0, 2000, unit);
  CHECK(d.e1 > d.e0);
  CHECK(d.e0 == doctest::Approx(dg.e0).epsilon(1e-7));
  CHECK(d.gap == doctest::Approx(dg.gap).epsilon(1e-6));
}

TEST_CASE("variational: ground energy decreases with the basis, independent of reference frequency") {
  const std::vector<double> poly{0.0, 0.0, 0.5, 0.0, 1.0};
  double prev = 1e300;
  for (int n : {10, 20, 40, 80}) {
    const auto r = diag_hermite(poly, n, 1.0, unit, 1.0);
    CHECK(r.e0 <= prev + 1e-13);
    prev = r.e0;
  }
  const double a = diag_hermite(poly, 200, 1.0, unit).e0;
  const double b = diag_hermite(poly, 200, 2.5, unit).e0;
  CHECK(a == doctest::Approx(b).epsilon(1e-10));
}

TEST_CASE("input checks and non-convergence") {
  CHECK_THROWS_AS(diag_hermite({0.0, 0.0, 0.5}, 5, 1.0, unit), std::invalid_argument);
  CHECK_THROWS_AS(diag_hermite({0.0, 0.0, 0.5, 0.1}, 20, 1.0, unit), std::invalid_argument);
  CHECK_THROWS_AS(diag_hermite({0.0, 0.0, 0.5, 0.0, -1.0}, 20, 1.0, unit), std::invalid_argument);
  CHECK_THROWS_AS(diag_hermite({0.0, 0.0, 0.5}, 20, 0.0, unit), std::invalid_argument);
  CHECK_THROWS_AS(diag_grid([](double x) { return x * x; }, -1.0, 1.0, 100, unit), std::invalid_argument);
  // a stiff quartic in a soft basis of 12 states is far from converged
  CHECK_THROWS_AS(diag_hermite({0.0, 0.0, 0.5, 0.0, 10.0}, 12, 0.2, unit), NonConvergence);
}
