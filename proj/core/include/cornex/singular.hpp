#pragma once

#include <complex>
#include <string>
#include <vector>

#include "cornex/poly.hpp"

namespace cornex {

using cplx = std::complex<double>;

/// Phi_{lk}^p in the corner variables y_j, j in p. Local coordinates are the
/// components of y listed in p, in order.
class SingularFunction {
 public:
  enum class Kind { RadialPower, PolyLog, Antiderivative };

  std::vector<int> p;    // corner axes (0-based, increasing)
  int l = 1;
  std::vector<int> k;    // antiderivative orders, one per axis in p
  std::vector<double> a; // coefficients a_j, one per axis in p
  Kind kind = Kind::RadialPower;
  Kind base_kind = Kind::RadialPower;
  double exponent = 0;   // RadialPower: Q^{-exponent}
  Poly p1, p2;           // PolyLog: p1 log Q + p2
  int times_coordinate = -1;  // local axis m: the function is y_m * (base expression)

  int dim() const { return static_cast<int>(p.size()); }
  int k_total() const;
  /// 2l - |p| + |k| (plus one when multiplied by a coordinate).
  int strength() const;
  double Q(const double* y_local) const;
  /// Value at local coordinates.
  cplx operator()(const double* y_local) const;
  /// Value at a full corner vector (components picked by p).
  cplx at(const double* y_corner) const;
  /// Base Phi_l (k = 0) value.
  cplx base(const double* y_local) const;
  bool closed_form() const;
  std::string id() const;
};

/// Base function Phi_l^p with a_j for j in p.
SingularFunction phi_base(const std::vector<int>& p, int l, const std::vector<double>& a);
/// k-fold iterated antiderivative from 0 along the axes of p.
SingularFunction phi_antiderivative(const SingularFunction& phi, const std::vector<int>& k);

/// d/dy_i Phi = factor * target + smooth (a polynomial in the local variables).
struct DerivativeRelation {
  SingularFunction target;
  cplx factor = 1.0;
  Poly smooth;
};
/// Local axis i. Throws UnreducibleTermError when k_i = 0 and l = 1.
DerivativeRelation phi_derivative(const SingularFunction& phi, int i);

/// Closed forms used by the antiderivative machinery.
/// int_0^y log(t^2/a + c) dt.
double log_antiderivative(double y, double a, double c);

/// Analytic value of the Fourier constant c in FT(chi Phi_l^p) = c / Sigma^l + s
/// for k = 0 (tests and diagnostics only; the pipeline uses fitted constants).
cplx analytic_ft_constant(int dim, int l, const std::vector<double>& a);

}  // namespace cornex
