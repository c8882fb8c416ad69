#pragma once

#include <vector>

namespace rgqm {

// Truncated Taylor series sum_k c[k] t^k, k = 0 .. order.
class Series {
public:
  explicit Series(int order) : c_(order + 1, 0.0) {}
  Series(int order, std::vector<double> coeffs);

  // Series of a polynomial's derivatives: c[k] = d^k/k! from the Taylor tower d.
  static Series from_derivatives(const std::vector<double>& derivs, int order);

  int order() const { return static_cast<int>(c_.size()) - 1; }
  double operator[](int k) const { return c_[k]; }
  double& operator[](int k) { return c_[k]; }
  const std::vector<double>& coeffs() const { return c_; }

  // k-th derivative at t = 0.
  double derivative(int k) const;
  std::vector<double> derivatives() const;

  Series derivative_series() const;  // d/dt, order drops by one
  Series operator+(const Series& o) const;
  Series operator-(const Series& o) const;
  Series operator*(const Series& o) const;
  Series operator*(double s) const;

  // log(s) and 1/s; both need s[0] > 0 for log and s[0] != 0 for the inverse.
  Series log() const;
  Series inverse() const;

  // Evaluate the truncated polynomial at t.
  double eval(double t) const;

private:
  std::vector<double> c_;
};

// Expand a polynomial sum_i a[i] x^i around x0 as a series in t = x - x0.
Series shift_polynomial(const std::vector<double>& a, double x0, int order);

}  // namespace rgqm
