#include "rgqm/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace rgqm {

namespace {

Monomial merge(const Monomial& a, const Monomial& b) {
  Monomial r;
  r.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

std::vector<std::vector<std::pair<const Monomial*, double>>> by_degree(
    const std::map<Monomial, double>& terms, int max_degree) {
  std::vector<std::vector<std::pair<const Monomial*, double>>> b(max_degree + 1);
  for (const auto& [m, c] : terms)
    if (static_cast<int>(m.size()) <= max_degree) b[m.size()].push_back({&m, c});
  return b;
}

}  // namespace

ModePolynomial ModePolynomial::constant(double c, int max_degree) {
  ModePolynomial p(max_degree);
  if (c != 0.0) p.terms_[{}] = c;
  return p;
}

double ModePolynomial::coeff(const Monomial& mono) const {
  auto it = terms_.find(mono);
  return it == terms_.end() ? 0.0 : it->second;
}

void ModePolynomial::add(const Monomial& mono, double value) {
  if (static_cast<int>(mono.size()) > max_degree_) return;
  Monomial key = mono;
  std::sort(key.begin(), key.end());
  terms_[key] += value;
}

void ModePolynomial::set(const Monomial& mono, double value) {
  Monomial key = mono;
  std::sort(key.begin(), key.end());
  if (static_cast<int>(key.size()) > max_degree_) return;
  terms_[key] = value;
}

ModePolynomial ModePolynomial::derivative(int k) const {
  ModePolynomial r(std::max(max_degree_ - 1, 0));
  for (const auto& [mono, c] : terms_) {
    const auto lo = std::lower_bound(mono.begin(), mono.end(), k);
    const auto hi = std::upper_bound(mono.begin(), mono.end(), k);
    const long count = hi - lo;
    if (count == 0) continue;
    Monomial reduced(mono.begin(), lo);
    reduced.insert(reduced.end(), lo + 1, mono.end());
    r.terms_[reduced] += c * static_cast<double>(count);
  }
  return r;
}

ModePolynomial ModePolynomial::drop_mode(int m) const {
  ModePolynomial r(max_degree_);
  for (const auto& [mono, c] : terms_) {
    bool hit = false;
    for (int k : mono)
      if (k == m || k == -m) {
        hit = true;
        break;
      }
    if (!hit) r.terms_.emplace(mono, c);
  }
  return r;
}

ModePolynomial ModePolynomial::truncated(int degree) const {
  ModePolynomial r(degree);
  for (const auto& [mono, c] : terms_)
    if (static_cast<int>(mono.size()) <= degree) r.terms_.emplace(mono, c);
  return r;
}

ModePolynomial ModePolynomial::operator+(const ModePolynomial& o) const {
  ModePolynomial r = truncated(std::min(max_degree_, o.max_degree_));
  for (const auto& [mono, c] : o.terms_)
    if (static_cast<int>(mono.size()) <= r.max_degree_) r.terms_[mono] += c;
  return r;
}

ModePolynomial ModePolynomial::operator-(const ModePolynomial& o) const { return *this + o * -1.0; }

ModePolynomial& ModePolynomial::operator+=(const ModePolynomial& o) {
  *this = *this + o;
  return *this;
}

ModePolynomial ModePolynomial::operator*(double s) const {
  ModePolynomial r(max_degree_);
  for (const auto& [mono, c] : terms_) r.terms_.emplace(mono, c * s);
  return r;
}

ModePolynomial ModePolynomial::operator*(const ModePolynomial& o) const {
  const int deg = std::min(max_degree_, o.max_degree_);
  ModePolynomial r(deg);
  const auto a = by_degree(terms_, deg);
  const auto b = by_degree(o.terms_, deg);
  for (int da = 0; da <= deg; ++da)
    for (int db = 0; da + db <= deg; ++db)
      for (const auto& [ma, ca] : a[da])
        for (const auto& [mb, cb] : b[db]) r.terms_[merge(*ma, *mb)] += ca * cb;
  return r;
}

ModePolynomial ModePolynomial::log() const {
  const double c0 = constant_term();
  if (!(c0 > 0)) throw std::domain_error("log of a mode polynomial with non-positive constant");
  ModePolynomial delta = *this * (1.0 / c0);
  delta.terms_.erase(Monomial{});
  ModePolynomial result = constant(std::log(c0), max_degree_);
  ModePolynomial power = delta;
  for (int n = 1; n <= max_degree_ && !power.terms_.empty(); ++n) {
    const double sign = (n % 2 == 1) ? 1.0 : -1.0;
    result += power * (sign / n);
    power = power * delta;
  }
  return result;
}

ModePolynomial ModePolynomial::inverse() const {
  const double c0 = constant_term();
  if (c0 == 0.0) throw std::domain_error("inverse of a mode polynomial with zero constant");
  ModePolynomial delta = *this * (1.0 / c0);
  delta.terms_.erase(Monomial{});
  ModePolynomial result = constant(1.0, max_degree_);
  ModePolynomial power = delta;
  for (int n = 1; n <= max_degree_ && !power.terms_.empty(); ++n) {
    result += power * ((n % 2 == 1) ? -1.0 : 1.0);
    power = power * delta;
  }
  return result * (1.0 / c0);
}

int ModePolynomial::max_mode() const {
  int r = -1;
  for (const auto& [mono, c] : terms_)
    for (int k : mono) r = std::max(r, std::abs(k));
  return r;
}

void ModePolynomial::prune(double tol) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= tol)
      it = terms_.erase(it);
    else
      ++it;
  }
}

double multiplicity_factorial(const Monomial& mono) {
  double f = 1.0;
  std::size_t i = 0;
  while (i < mono.size()) {
    std::size_t j = i;
    while (j < mono.size() && mono[j] == mono[i]) ++j;
    for (std::size_t c = 2; c <= j - i; ++c) f *= static_cast<double>(c);
    i = j;
  }
  return f;
}

int momentum(const Monomial& mono) {
  int s = 0;
  for (int k : mono) s += k;
  return s;
}

}  // namespace rgqm
