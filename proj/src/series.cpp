#include "rgqm/series.hpp"

#include <cmath>
#include <stdexcept>

namespace rgqm {

Series::Series(int order, std::vector<double> coeffs) : c_(std::move(coeffs)) {
  c_.resize(order + 1, 0.0);
}

Series Series::from_derivatives(const std::vector<double>& derivs, int order) {
  Series s(order);
  double fact = 1.0;
  for (int k = 0; k <= order; ++k) {
    if (k > 0) fact *= k;
    if (k < static_cast<int>(derivs.size())) s.c_[k] = derivs[k] / fact;
  }
  return s;
}

double Series::derivative(int k) const {
  double fact = 1.0;
  for (int i = 2; i <= k; ++i) fact *= i;
  return c_[k] * fact;
}

std::vector<double> Series::derivatives() const {
  std::vector<double> d(c_.size());
  for (int k = 0; k <= order(); ++k) d[k] = derivative(k);
  return d;
}

Series Series::derivative_series() const {
  Series d(std::max(order() - 1, 0));
  for (int k = 1; k <= order(); ++k) d.c_[k - 1] = k * c_[k];
  return d;
}

Series Series::operator+(const Series& o) const {
  Series r(std::min(order(), o.order()));
  for (int k = 0; k <= r.order(); ++k) r.c_[k] = c_[k] + o.c_[k];
  return r;
}

Series Series::operator-(const Series& o) const {
  Series r(std::min(order(), o.order()));
  for (int k = 0; k <= r.order(); ++k) r.c_[k] = c_[k] - o.c_[k];
  return r;
}

Series Series::operator*(const Series& o) const {
  Series r(std::min(order(), o.order()));
  for (int i = 0; i <= r.order(); ++i)
    for (int j = 0; i + j <= r.order(); ++j) r.c_[i + j] += c_[i] * o.c_[j];
  return r;
}

Series Series::operator*(double s) const {
  Series r(*this);
  for (auto& v : r.c_) v *= s;
  return r;
}

Series Series::log() const {
  if (!(c_[0] > 0)) throw std::domain_error("log of a series with non-positive constant term");
  // (log s)' = s'/s
  const Series ds = derivative_series();
  const Series q = ds * inverse();
  Series r(order());
  r.c_[0] = std::log(c_[0]);
  for (int k = 1; k <= order(); ++k) r.c_[k] = q.c_[k - 1] / k;
  return r;
}

Series Series::inverse() const {
  if (c_[0] == 0.0) throw std::domain_error("inverse of a series with zero constant term");
  Series r(order());
  r.c_[0] = 1.0 / c_[0];
  for (int k = 1; k <= order(); ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += c_[j] * r.c_[k - j];
    r.c_[k] = -s / c_[0];
  }
  return r;
}

double Series::eval(double t) const {
  double s = 0.0;
  for (int k = order(); k >= 0; --k) s = s * t + c_[k];
  return s;
}

Series shift_polynomial(const std::vector<double>& a, double x0, int order) {
  // Taylor coefficients of sum a_i x^i at x0: c_k = sum_i a_i C(i,k) x0^(i-k).
  Series s(order);
  for (int k = 0; k <= order; ++k) {
    double acc = 0.0;
    for (int i = k; i < static_cast<int>(a.size()); ++i) {
      double binom = 1.0;
      for (int j = 1; j <= k; ++j) binom = binom * (i - k + j) / j;
      acc += a[i] * binom * std::pow(x0, i - k);
    }
    s[k] = acc;
  }
  return s;
}

}  // namespace rgqm
