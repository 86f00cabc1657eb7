#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "cornex/error.hpp"
#include "cornex/oracle.hpp"

namespace cornex {

double bessel_i0_scaled(double x) {
  x = std::abs(x);
  if (x < 30) return std::cyl_bessel_i(0.0, x) * std::exp(-x);
  // large-argument expansion, terms (2k-1)^2 / (8 k x)
  double sum = 1, t = 1;
  for (int k = 1; k < 200; ++k) {
    double next = t * (2.0 * k - 1) * (2.0 * k - 1) / (8.0 * k * x);
    if (next > t) break;
    t = next;
    sum += t;
    if (t < 1e-17 * sum) break;
  }
  return sum / std::sqrt(2 * std::numbers::pi * x);
}

std::vector<double> bessel_zeros(int n, int count) {
  if (n < 0 || count < 0) throw ShapeError("bessel_zeros: negative order or count");
  std::vector<double> z;
  z.reserve(count);
  const double nu = n;
  auto J = [nu](double x) { return std::cyl_bessel_j(nu, x); };
  // consecutive zeros are more than 3 apart
  const double step = std::numbers::pi / 4;
  double a = std::max(nu, 0.5), fa = J(a);
  boost::math::tools::eps_tolerance<double> tol(52);
  while (static_cast<int>(z.size()) < count) {
    double b = a + step, fb = J(b);
    if (fa == 0) {
      z.push_back(a);
    } else if (fa * fb < 0) {
      std::uintmax_t it = 100;
      auto r = boost::math::tools::toms748_solve(J, a, b, fa, fb, tol, it);
      z.push_back(0.5 * (r.first + r.second));
    }
    a = b;
    fa = fb;
  }
  return z;
}

void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w) {
  // Golub-Welsch
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double beta = k / std::sqrt(4.0 * k * k - 1);
    J(k, k - 1) = J(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  x.resize(n);
  w.resize(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (int i = 0; i < n; ++i) {
    x[i] = mid + half * es.eigenvalues()(i);
    double v = es.eigenvectors()(0, i);
    w[i] = 2 * v * v * half;
  }
}

}  // namespace cornex
