#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "cornex/error.hpp"
#include "cornex/oracle.hpp"

namespace cornex {

namespace {

double binomial(int n, int k) {
  double b = 1;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

/// Central mixed difference Delta_h^{(a, b)} u at p.
double mixed_difference(const PlaneFunction& u, double x, double y, int a, int b, double h) {
  double s = 0;
  for (int i = 0; i <= a; ++i)
    for (int j = 0; j <= b; ++j) {
      double c = binomial(a, i) * binomial(b, j) * (((a - i) + (b - j)) % 2 ? -1 : 1);
      s += c * u(x + (i - 0.5 * a) * h, y + (j - 0.5 * b) * h);
    }
  return s;
}

}  // namespace

MeterSpec MeterSpec::corner() { return MeterSpec{}; }

MeterSpec MeterSpec::edge(double y2) {
  MeterSpec m;
  m.center = {0, y2};
  m.angles = {-std::numbers::pi / 8, 0, std::numbers::pi / 8};
  return m;
}

MeterSpec MeterSpec::interior(double y1, double y2) {
  MeterSpec m;
  m.center = {y1, y2};
  m.angles = {0, std::numbers::pi / 2, std::numbers::pi, 3 * std::numbers::pi / 2};
  return m;
}

RegularityReport regularity_meter(const PlaneFunction& u, const MeterSpec& spec) {
  if (!(spec.r_lo > 0 && spec.r_hi > spec.r_lo) || spec.samples < 2)
    throw ShapeError("meter needs 0 < r_lo < r_hi and two or more samples");
  RegularityReport rep;
  rep.id = "meter";
  std::vector<double> r(spec.samples);
  for (int k = 0; k < spec.samples; ++k)
    r[k] = spec.r_lo * std::pow(spec.r_hi / spec.r_lo, static_cast<double>(k) / (spec.samples - 1));
  for (int m : spec.orders) {
    std::vector<double> D(spec.samples, 0.0);
    for (int k = 0; k < spec.samples; ++k) {
      double h = spec.step_ratio * r[k];
      for (double th : spec.angles) {
        double x = spec.center[0] + r[k] * std::cos(th), y = spec.center[1] + r[k] * std::sin(th);
        for (int a = 0; a <= m; ++a)
          D[k] = std::max(D[k], std::abs(mixed_difference(u, x, y, a, m - a, h)) / std::pow(h, m));
      }
    }
    rep.orders.push_back(classify_growth(m, r, D));
  }
  if (spec.samples < 5) rep.note = "insufficient dynamic range: fewer than five radii";
  return rep;
}

SingularFit fit_singular_coefficients(const PlaneFunction& u, const std::vector<SingularFunction>& basis,
                                      const FitWindow& window, int poly_degree, double max_condition) {
  if (!(window.r_a > 0 && window.r_b > window.r_a)) throw FitError("fit window needs 0 < r_a < r_b");
  for (const auto& s : basis)
    if (s.dim() != 2) throw FitError("fit basis must live on the transverse 2-plane: " + s.id());
  std::vector<std::pair<int, int>> mono;
  for (int d = 0; d <= poly_degree; ++d)
    for (int a = d; a >= 0; --a) mono.emplace_back(a, d - a);
  const int nb = static_cast<int>(basis.size()), np = static_cast<int>(mono.size());
  const int rows = window.radii * window.angles, cols = nb + np;
  if (rows <= cols) throw FitError("fit window has fewer samples than unknowns");
  Eigen::MatrixXcd A(rows, cols);
  Eigen::VectorXcd b(rows);
  int row = 0;
  for (int i = 0; i < window.radii; ++i) {
    double r = window.r_a + (window.r_b - window.r_a) * i / (window.radii - 1);
    for (int j = 0; j < window.angles; ++j, ++row) {
      double th = (j + 0.5) * std::numbers::pi / (2 * window.angles);
      double y[2] = {r * std::cos(th), r * std::sin(th)};
      for (int c = 0; c < nb; ++c) A(row, c) = basis[c](y);
      for (int c = 0; c < np; ++c) A(row, nb + c) = std::pow(y[0], mono[c].first) * std::pow(y[1], mono[c].second);
      b(row) = u(y[0], y[1]);
    }
  }
  Eigen::VectorXd scale = A.colwise().norm().transpose();
  for (int c = 0; c < cols; ++c) {
    if (scale(c) == 0) throw FitError("fit basis column vanishes on the window");
    A.col(c) /= scale(c);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  SingularFit fit;
  fit.condition = sv(0) / sv(sv.size() - 1);
  fit.degree = poly_degree;
  fit.samples = rows;
  if (!(fit.condition < max_condition))
    throw FitError("ill-conditioned singular fit, condition " + std::to_string(fit.condition));
  Eigen::VectorXcd x = svd.solve(b);
  fit.relative_residual = (A * x - b).norm() / b.norm();
  for (int c = 0; c < nb; ++c) fit.coefficients.push_back(x(c) / scale(c));
  for (int c = 0; c < np; ++c) fit.polynomial.push_back((x(nb + c) / scale(nb + c)).real());
  return fit;
}

PlaneFunction subtract_fit(const PlaneFunction& u, const std::vector<SingularFunction>& basis,
                           const SingularFit& fit) {
  return [u, basis, c = fit.coefficients](double y1, double y2) {
    double y[2] = {y1, y2};
    cplx s = 0;
    for (std::size_t i = 0; i < basis.size(); ++i) s += c[i] * basis[i](y);
    return u(y1, y2) - s.real();
  };
}

AwayReport away_from_corner_check(const PlaneFunction& u, const MeterSpec& region, int through) {
  AwayReport rep;
  rep.through = through;
  MeterSpec spec = region;
  spec.orders.clear();
  for (int m = 1; m <= through; ++m) spec.orders.push_back(m);
  rep.meter = regularity_meter(u, spec);
  rep.meter.id = "away-from-corner";
  rep.bounded = rep.meter.bounded_through(through);
  return rep;
}

}  // namespace cornex
