#pragma once

#include <complex>
#include <map>
#include <vector>

namespace rgqm {

// Sorted list of mode indices, repeats allowed: {-1, 0, 0, 1} is xi_{-1} xi_0^2 xi_1.
using Monomial = std::vector<int>;

// Sparse polynomial in the mode variables xi_k, truncated at total degree max_degree.
class ModePolynomial {
public:
  explicit ModePolynomial(int max_degree) : max_degree_(max_degree) {}
  static ModePolynomial constant(double c, int max_degree);

  int max_degree() const { return max_degree_; }
  const std::map<Monomial, double>& terms() const { return terms_; }

  double coeff(const Monomial& mono) const;
  double constant_term() const { return coeff({}); }
  void add(const Monomial& mono, double value);  // mono need not be sorted
  void set(const Monomial& mono, double value);

  ModePolynomial derivative(int k) const;
  // Sets xi_{m} = xi_{-m} = 0.
  ModePolynomial drop_mode(int m) const;
  ModePolynomial truncated(int degree) const;

  ModePolynomial operator+(const ModePolynomial& o) const;
  ModePolynomial operator-(const ModePolynomial& o) const;
  ModePolynomial operator*(const ModePolynomial& o) const;
  ModePolynomial operator*(double s) const;
  ModePolynomial& operator+=(const ModePolynomial& o);

  // Truncated power series of log(P) and 1/P around the constant term.
  ModePolynomial log() const;
  ModePolynomial inverse() const;

  // value(k) supplies xi_k; modes it does not know are treated as zero by the caller.
  template <class F>
  std::complex<double> evaluate(F value) const {
    std::complex<double> s = 0.0;
    for (const auto& [mono, c] : terms_) {
      std::complex<double> t = c;
      for (int k : mono) t *= value(k);
      s += t;
    }
    return s;
  }

  // Largest |k| present, or -1 when the polynomial is constant.
  int max_mode() const;
  void prune(double tol = 0.0);

private:
  int max_degree_;
  std::map<Monomial, double> terms_;
};

// prod_k c_k! for the multiplicities c_k in a sorted monomial.
double multiplicity_factorial(const Monomial& mono);
int momentum(const Monomial& mono);

}  // namespace rgqm
