#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cornex/jet.hpp"

namespace cornex {

using cplx = std::complex<double>;

/// Graph function phi : R^j -> R with analytic derivatives.
struct GraphFunction {
  std::string preset;
  int dim = 0;
  std::function<double(const double*)> value;
  std::function<void(const double*, double*)> gradient;
  std::function<void(const double*, double*)> hessian;  // dim x dim, row major
  double domain_radius = 1e300;                          // |t| must stay below this
};

/// Presets: flat, paraboloid:a, quartic:a, disk:R, linear:a.
GraphFunction make_graph(const std::string& preset, int dim);

struct FactorSpec {
  int ambient_dim = 1;  // 1 + j
  GraphFunction graph;
  int tangential_dim() const { return ambient_dim - 1; }
};

FactorSpec make_factor(const std::string& preset, int ambient_dim);

/// Spatial cutoff phi(x) = Psi(|x - x0|^2 / R^2): 1 on the ball of radius R/2,
/// 0 outside radius R, C^inf transition.
struct SpatialCutoff {
  double radius = 1.0;
  double operator()(double r2) const;
  /// Taylor series of Psi(s) at s0 = r2 / R^2, in the variable r2.
  Series series(double r2, int order) const;
};

struct ProductDomainSpec {
  std::vector<FactorSpec> factors;
  std::vector<double> base_point;  // length n, ordering (x_1..x_q, t^1, ..., t^q)
  double local_radius = 0.5;
  bool require_normalized = true;

  int q() const { return static_cast<int>(factors.size()); }
  int n() const;
  /// Index of the first tangential coordinate of factor i in the n-vector.
  int tangential_offset(int i) const;
  double cutoff(const double* x) const;
  SpatialCutoff cutoff_profile() const { return SpatialCutoff{local_radius}; }
};

/// Throws GeometryError on inconsistent derivatives, bad normalization or q < 2.
void validate(const ProductDomainSpec& domain);

/// Standard geometries. "flat2" is the unit-square chart (q=2, j=0),
/// "standard" is q=2, j=(1,0) with a paraboloid factor.
ProductDomainSpec make_domain(const std::vector<std::string>& presets, const std::vector<int>& dims,
                              double local_radius);

class TransformData {
 public:
  explicit TransformData(ProductDomainSpec domain);

  const ProductDomainSpec& domain() const { return domain_; }
  int q() const { return domain_.q(); }
  int n() const { return domain_.n(); }

  /// A[k][i] = dy_i / dx_k.
  Eigen::MatrixXd jacobian(const double* y) const;
  /// g = A^T A.
  Eigen::MatrixXd metric(const double* y) const;
  /// Coefficient matrix of the second-order part read off the expanded
  /// operator: a_i on the diagonal, -phi_{i,m} cross terms, identity tangential.
  Eigen::MatrixXd metric_from_operator(const double* y) const;

  double a(int i, const double* y) const;
  /// First-order coefficient of d/dy_i: -Laplacian_t(phi_i).
  double first_order_coeff(int i, const double* y) const;
  /// Gradient of phi_i at the tangential part of y (size j_i).
  std::vector<double> graph_gradient(int i, const double* y) const;
  double graph_laplacian(int i, const double* y) const;

  /// B_i(y, xi) = 2 sum_m phi_{i,m} xi_m + i Lap(phi_i); xi has length n - q.
  cplx B(int i, const double* y, const double* xi) const;
  /// Symbol of b_i = -2 sum_m phi_{i,m} d_{t_m} - Lap(phi_i) under d <-> -i xi.
  cplx b_symbol(int i, const double* y, const double* xi) const;
  /// C(y, xi) = |xi|^2.
  double C(const double* y, const double* xi) const;
  /// P = -sum a_i eta_i^2 + sum B_i eta_i - C.
  cplx P(const double* y, const double* xi, const double* eta) const;

 private:
  ProductDomainSpec domain_;
};

TransformData build_transform(const ProductDomainSpec& domain);

/// Model coordinates: y_i = x_i - x0_i - phi_i(t - t0), y_t = t - t0.
std::vector<double> to_model_coordinates(const ProductDomainSpec& domain, const std::vector<double>& x);
std::vector<double> from_model_coordinates(const ProductDomainSpec& domain, const std::vector<double>& y);
/// Same maps without the chart check; used for points where the cutoff vanishes.
void to_model_unchecked(const ProductDomainSpec& domain, const double* x, double* y);
void from_model_unchecked(const ProductDomainSpec& domain, const double* y, double* x);

}  // namespace cornex
