#pragma once

#include <cstddef>
#include <vector>

namespace cornex {

/// Truncated univariate Taylor series c_0 + c_1 t + ... + c_K t^K.
class Series {
 public:
  Series() = default;
  Series(int order, double c0);
  static Series variable(int order, double x0);

  int order() const { return static_cast<int>(c_.size()) - 1; }
  double operator[](int k) const { return c_[k]; }
  double& operator[](int k) { return c_[k]; }
  const std::vector<double>& coeffs() const { return c_; }

  Series& operator+=(const Series& o);
  Series& operator-=(const Series& o);
  Series& operator*=(double s);

  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator*(const Series& a, const Series& b);
  friend Series operator/(const Series& a, const Series& b);
  friend Series operator*(Series a, double s) { return a *= s; }
  friend Series operator*(double s, Series a) { return a *= s; }

 private:
  std::vector<double> c_;
};

Series exp(const Series& a);
Series log(const Series& a);
Series sqrt(const Series& a);
Series sin(const Series& a);
Series cos(const Series& a);
Series reciprocal(const Series& a);

/// Multivariate truncated Taylor jet over d axes with per-axis maximal order.
/// Coefficient of e_1^{a_1}...e_d^{a_d} is stored densely; derivatives are
/// coefficient * prod(a_i!).
class Jet {
 public:
  Jet() = default;
  Jet(std::vector<int> orders, double c0);
  static Jet variable(const std::vector<int>& orders, int axis, double x0);

  int dims() const { return static_cast<int>(orders_.size()); }
  const std::vector<int>& orders() const { return orders_; }
  double value() const { return c_[0]; }
  double coefficient(const std::vector<int>& alpha) const;
  double derivative(const std::vector<int>& alpha) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator+=(double s);
  Jet& operator*=(double s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a += -s; }
  friend Jet operator-(double s, Jet a) {
    a *= -1.0;
    return a += s;
  }
  friend Jet operator-(Jet a) { return a *= -1.0; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator/(Jet a, double s) { return a *= 1.0 / s; }

  /// f(a) for a univariate f given by its Taylor series around a.value().
  Jet compose(const Series& f_at_value) const;

  std::size_t flat_index(const std::vector<int>& alpha) const;
  std::size_t size() const { return c_.size(); }

 private:
  std::vector<int> orders_;
  std::vector<std::size_t> strides_;
  std::vector<double> c_;
  int total_order() const;
};

Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);

}  // namespace cornex
