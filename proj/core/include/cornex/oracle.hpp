#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "cornex/defaults.hpp"
#include "cornex/regularity.hpp"
#include "cornex/singular.hpp"

namespace cornex {

/// e^{-x} I_0(x) for x >= 0, finite for every x.
double bessel_i0_scaled(double x);
/// First `count` positive zeros of J_n: sign-change scan, then bracketed refinement.
std::vector<double> bessel_zeros(int n, int count);

enum class FactorKind { Interval, Disk };

struct FactorShape {
  FactorKind kind = FactorKind::Interval;
  double size = 1.0;  // interval length or disk radius
  int dim() const { return kind == FactorKind::Interval ? 1 : 2; }
  std::string id() const;
};

/// Product of intervals and disks. A point lists the factor coordinates in
/// order: x in [0, size] for an interval, Cartesian (x1, x2) about the
/// center for a disk.
struct OracleDomain {
  std::vector<FactorShape> factors;

  int dim() const;
  std::string id() const;
  /// Distance of each factor component to that factor's boundary (negative outside).
  std::vector<double> boundary_distance(const double* x) const;
  /// Point at inward normal distances y_i from the distinguished boundary
  /// point: 0 on an interval, (size, 0) on a disk.
  std::vector<double> transverse_point(double y1, double y2) const;

  /// "interval:1,disk:1"; also "square" and "disks".
  static OracleDomain parse(const std::string& s);
  static OracleDomain square() { return parse("interval:1,interval:1"); }
  static OracleDomain disk_interval() { return parse("disk:1,interval:1"); }
  static OracleDomain disks() { return parse("disk:1,disk:1"); }
};

using PointFunction = std::function<double(const double*)>;
using PlaneFunction = std::function<double(double, double)>;

struct EigenMode {
  double lambda = 0;
  int angular = 0;  // disk: n in cos(n theta) / sin(n theta)
  int radial = 0;   // interval: n in sin(n pi x / L); disk: zero index k
  bool sine = false;
  double zero = 0;  // disk: j_{n,k}
  double norm = 1;
};

/// Dirichlet eigenpairs of one factor, ordered by eigenvalue, with a
/// product Gauss rule for projections.
class FactorEigenBasis {
 public:
  static FactorEigenBasis build(const FactorShape& shape, int mode_cap);

  const FactorShape& shape() const { return shape_; }
  const std::vector<EigenMode>& modes() const { return modes_; }
  int size() const { return static_cast<int>(modes_.size()); }
  double lambda(int m) const { return modes_[m].lambda; }
  double eval(int m, const double* x) const;
  int quadrature_size() const { return static_cast<int>(weights_.size()); }
  const double* node(int i) const { return &nodes_[i * shape_.dim()]; }
  double weight(int i) const { return weights_[i]; }
  std::vector<double> project(const PointFunction& g) const;
  /// max |<phi_m, phi_n> - delta_mn| under the quadrature.
  double orthonormality_defect() const;

 private:
  FactorShape shape_;
  std::vector<EigenMode> modes_;
  std::vector<double> nodes_, weights_;
};

/// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w);

struct OracleData {
  PointFunction f;
  bool constant = false;
  double value = 0;
  static OracleData uniform(double c);
  static OracleData function(PointFunction f);
};

/// Solution of Delta u = f, u = 0 on the boundary of a two-factor product.
struct OracleSolution {
  std::string domain_id;
  OracleDomain domain;
  std::string method;  // "modal" or "resolvent"
  int mode_cap = 0;
  /// modal: u_{mn} = -f_{mn} / (lambda_m + mu_n), row-major over the two bases
  std::vector<double> coefficients;
  std::array<int, 2> shape{0, 0};
  PointFunction evaluate;
  /// Estimated truncation error at a point.
  PointFunction tail;

  double operator()(const double* x) const { return evaluate(x); }
  double at(const std::vector<double>& x) const { return evaluate(x.data()); }
  /// u on the 2-plane of normal coordinates at the distinguished boundary point.
  PlaneFunction transverse() const;
};

/// Modal projection for general f. Uniform f on any two factors uses the
/// resolvent form, which sums one factor's modes adaptively up to
/// `resolvent_cap` and resolves the other factor in closed form.
OracleSolution tensor_solve(const OracleDomain& domain, const OracleData& f, int mode_cap = defaults::mode_cap,
                            int resolvent_cap = defaults::resolvent_mode_cap);

/// Five-point finite differences on the square [0, L]^2.
struct FdSolution {
  int n = 0;  // intervals per side
  double h = 0;
  std::vector<double> values;  // (n+1)^2 nodes, row-major in (x, y), boundary included
  double node(int i, int j) const { return values[static_cast<std::size_t>(i) * (n + 1) + j]; }
  /// Bilinear interpolation.
  double operator()(double x, double y) const;
};

FdSolution fd_solve(const OracleDomain& square, const std::function<double(double, double)>& f, int n);

struct MeterSpec {
  std::array<double, 2> center{0, 0};
  /// Directions into the domain, radians from the y1 axis.
  std::vector<double> angles{0.3926990816987241, 0.7853981633974483, 1.1780972450961934};
  double r_lo = 0.005;
  double r_hi = 0.05;
  int samples = 10;
  double step_ratio = 0.1;  // difference step h = step_ratio * r
  std::vector<int> orders{1, 2, 3, 4};

  static MeterSpec corner();
  /// Approach of a single boundary edge {y1 = 0} at height y2.
  static MeterSpec edge(double y2);
  static MeterSpec interior(double y1, double y2);
};

/// Growth of m-th differences max_{|alpha|=m} |Delta_h^alpha u| / h^m with
/// h tied to the distance r from the center.
RegularityReport regularity_meter(const PlaneFunction& u, const MeterSpec& spec);

struct FitWindow {
  double r_a = defaults::fit_window_lo;
  double r_b = defaults::fit_window_hi;
  int radii = 12;
  int angles = 16;
};

struct SingularFit {
  std::vector<cplx> coefficients;  // one per basis function
  std::vector<double> polynomial;  // monomials y1^a y2^b, a + b <= degree, graded order
  int degree = 0;
  double relative_residual = 0;
  double condition = 0;
  std::size_t samples = 0;
};

/// Least squares of u against the basis plus real polynomials on the
/// quarter annulus r in [r_a, r_b]. Basis members are evaluated with local
/// coordinates (y1, y2). Throws FitError when the condition number exceeds `max_condition`.
SingularFit fit_singular_coefficients(const PlaneFunction& u, const std::vector<SingularFunction>& basis,
                                      const FitWindow& window, int poly_degree = 3, double max_condition = 1e12);

/// u minus the fitted singular part.
PlaneFunction subtract_fit(const PlaneFunction& u, const std::vector<SingularFunction>& basis,
                           const SingularFit& fit);

struct AwayReport {
  RegularityReport meter;
  int through = 4;
  bool bounded = false;
};

/// Meter over a window that touches at most one boundary piece.
AwayReport away_from_corner_check(const PlaneFunction& u, const MeterSpec& region, int through = 4);

}  // namespace cornex
