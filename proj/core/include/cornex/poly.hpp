#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace cornex {

using cplx = std::complex<double>;
using Monomial = std::vector<int>;

/// Sparse multivariate polynomial with complex coefficients over a fixed
/// number of variables. Exponents are nonnegative.
class Poly {
 public:
  Poly() = default;
  explicit Poly(int vars) : vars_(vars) {}
  static Poly constant(int vars, cplx c);
  static Poly variable(int vars, int i);
  static Poly monomial(int vars, const Monomial& m, cplx c);

  int vars() const { return vars_; }
  const std::map<Monomial, cplx>& terms() const { return terms_; }
  bool is_zero(double tol = 0.0) const;
  cplx coefficient(const Monomial& m) const;
  void add(const Monomial& m, cplx c);

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(cplx s);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, cplx s) { return a *= s; }
  friend Poly operator*(cplx s, Poly a) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b);

  Poly derivative(int i) const;
  /// Integral from 0 to y_i in variable i.
  Poly integral(int i) const;
  cplx operator()(const double* y) const;
  /// Total degree (-1 for the zero polynomial).
  int degree() const;
  /// Maximal total degree in the listed variables.
  int degree_in(const std::vector<int>& vars) const;
  /// Drops coefficients with |c| <= tol.
  Poly pruned(double tol) const;
  std::string str(const std::vector<std::string>& names = {}) const;

 private:
  int vars_ = 0;
  std::map<Monomial, cplx> terms_;
};

Poly pow(const Poly& p, int k);

}  // namespace cornex
