#include <cmath>
#include <stdexcept>
#include <complex>
#include <map>
#include <random>

#include "doctest.h"
#include "rgqm/polynomial.hpp"

using namespace rgqm;

namespace {

ModePolynomial random_poly(std::mt19937_64& rng, int degree, double c0) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  ModePolynomial p = ModePolynomial::constant(c0, degree);
  p.add({-1, 1}, u(rng));
  p.add({0}, u(rng));
  p.add({0, 0}, u(rng));
  p.add({-2, 1, 1}, u(rng));
  p.add({-1, -1, 2}, u(rng));
  p.add({-1, 0, 1}, u(rng));
  p.add({-2, -1, 1, 2}, u(rng));
  return p;
}

std::complex<double> at(const ModePolynomial& p, const std::map<int, std::complex<double>>& x) {
  return p.evaluate([&](int k) {
    const auto it = x.find(k);
    return it == x.end() ? std::complex<double>(0.0) : it->second;
  });
}

}  // namespace

TEST_CASE("multiplicity factorial and momentum") {
  CHECK(multiplicity_factorial({}) == 1.0);
  CHECK(multiplicity_factorial({-1, 0, 0, 1}) == 2.0);
  CHECK(multiplicity_factorial({0, 0, 0, 2, 2}) == 12.0);
  CHECK(momentum({-2, 1, 1}) == 0);
  CHECK(momentum({-1, 2}) == 1);
}

TEST_CASE("add sorts its monomial, coefficients accumulate") {
  ModePolynomial p(4);
  p.add({1, -1}, 0.5);
  p.add({-1, 1}, 0.25);
  CHECK(p.coeff({-1, 1}) == 0.75);
  CHECK(p.max_mode() == 1);
  CHECK(ModePolynomial::constant(2.0, 4).max_mode() == -1);
}

TEST_CASE("products, inverse and log agree with pointwise evaluation") {
  std::mt19937_64 rng(3);
  const std::map<int, std::complex<double>> x{
      {0, {0.03, 0.0}}, {1, {0.02, 0.01}}, {-1, {0.02, -0.01}}, {2, {-0.01, 0.015}}, {-2, {-0.01, -0.015}}};
  for (int trial = 0; trial < 5; ++trial) {
    const ModePolynomial a = random_poly(rng, 8, 1.3);
    const ModePolynomial b = random_poly(rng, 8, 0.9);
    CHECK(std::abs(at(a * b, x) - at(a, x) * at(b, x)) < 1e-14);
    // truncation errors are eighth order in the small amplitudes
    CHECK(std::abs(at(a.inverse(), x) - 1.0 / at(a, x)) < 1e-12);
    CHECK(std::abs(at(a.log(), x) - std::log(at(a, x))) < 1e-12);
    const ModePolynomial one = a * a.inverse();
    CHECK(one.constant_term() == doctest::Approx(1.0).epsilon(1e-14));
    for (const auto& [mono, c] : one.terms())
      if (!mono.empty()) CHECK(std::abs(c) < 1e-12);
  }
}

TEST_CASE("derivative and drop_mode") {
  ModePolynomial p(6);
  p.add({-1, 1}, 2.0);
  p.add({-1, -1, 1, 1}, 3.0);
  p.add({0, 0}, 1.0);
  const ModePolynomial d = p.derivative(1);
  CHECK(d.coeff({-1}) == 2.0);
  CHECK(d.coeff({-1, -1, 1}) == 6.0);
  CHECK(d.coeff({0}) == 0.0);
  const ModePolynomial q = p.drop_mode(1);
  CHECK(q.terms().size() == 1);
  CHECK(q.coeff({0, 0}) == 1.0);
  CHECK(p.truncated(2).coeff({-1, -1, 1, 1}) == 0.0);
}

TEST_CASE("log needs a positive constant term") {
  ModePolynomial p(4);
  p.add({0}, 1.0);
  CHECK_THROWS_AS(p.log(), std::domain_error);
  CHECK_THROWS_AS(p.inverse(), std::domain_error);
}
