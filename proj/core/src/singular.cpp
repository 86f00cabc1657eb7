#include "cornex/singular.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cornex/defaults.hpp"
#include "cornex/error.hpp"

namespace cornex {

namespace {

constexpr cplx I(0, 1);

/// (-a1 Q')^k where Q' = sum_{j >= 1} y_j^2 / a_j.
Poly neg_q_rest_pow(const std::vector<double>& a, int k) {
  const int d = static_cast<int>(a.size());
  Poly qr(d);
  for (int j = 1; j < d; ++j) {
    Monomial m(d, 0);
    m[j] = 2;
    qr.add(m, 1.0 / a[j]);
  }
  return pow(qr * cplx(-a[0]), k);
}

/// Splits an even-in-y0 polynomial into coefficients alpha_k(y') of y0^{2k}.
std::vector<Poly> split_even(const Poly& A) {
  const int d = A.vars();
  std::vector<Poly> alpha;
  for (const auto& [m, c] : A.terms()) {
    if (m[0] % 2) throw Error("internal: polynomial not even in the first variable");
    int k = m[0] / 2;
    if (static_cast<int>(alpha.size()) <= k) alpha.resize(k + 1, Poly(d));
    Monomial mm(m);
    mm[0] = 0;
    alpha[k].add(mm, c);
  }
  return alpha;
}

/// One step of the defining recursion dPhi_l/dy1 = y1 Phi_{l-1}.
void polylog_step(const std::vector<double>& a, Poly& p1, Poly& p2) {
  const int d = static_cast<int>(a.size());
  Poly y0 = Poly::variable(d, 0);
  Poly A = (y0 * p1).integral(0);
  auto alpha = split_even(A);
  Poly P(d), S(d);
  Poly X = y0 * y0;
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    if (alpha[k].is_zero()) continue;
    // alpha_k (X^k - c^k) and S += a1 alpha_k sum_m X^m c^{k-1-m}, c = -a1 Q'
    P += alpha[k] * (pow(X, static_cast<int>(k)) - neg_q_rest_pow(a, static_cast<int>(k)));
    for (std::size_t m = 0; m < k; ++m)
      S += alpha[k] * pow(X, static_cast<int>(m)) * neg_q_rest_pow(a, static_cast<int>(k - 1 - m)) * cplx(a[0]);
  }
  Poly R = (y0 * p2 - y0 * S * cplx(2.0 / a[0])).integral(0);
  p1 = P;
  p2 = R;
}

cplx integrate_c(const std::function<cplx(double)>& f, double b) {
  if (b == 0) return 0.0;
  // depth cap: the closed forms carry cancellation noise that a relative tolerance cannot beat
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, b, 6, defaults::quadrature_tol);
}

double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

/// Phi_{1,(1,0)} in 2D.
cplx phi1_k10(const double* y, double a0, double a1) {
  double c = y[1] * y[1] / a1;
  return -0.5 * I * log_antiderivative(y[0], a0, c);
}

/// Phi_{1,(1,1)} in 2D.
cplx phi1_k11(const double* y, double a0, double a1) {
  double y1 = y[0], y2 = std::abs(y[1]);
  double sgn = y[1] < 0 ? -1.0 : 1.0;
  double kap = std::sqrt(a0 / a1);
  // int_0^{y2} [ int_0^{y1} log(t^2/a0 + s^2/a1) dt ] ds, integrand even in s
  double term1 = y1 * log_antiderivative(y2, a1, y1 * y1 / a0);
  double term2 = -2 * y1 * y2;
  double term3 = 0;
  if (y2 > 0 && y1 != 0) {
    double c = y1 / kap;
    term3 = 2 * kap * (0.5 * y2 * y2 * std::atan(c / y2) + 0.5 * c * y2 - 0.5 * c * c * std::atan(y2 / c));
  }
  return -0.5 * I * sgn * (term1 + term2 + term3);
}

}  // namespace

double log_antiderivative(double y, double a, double c) {
  double q = y * y / a + c;
  double b = a * c;
  double v = (q > 0 ? y * std::log(q) : 0.0) - 2 * y;
  if (b > 0) v += 2 * std::sqrt(b) * std::atan(y / std::sqrt(b));
  return v;
}

int SingularFunction::k_total() const {
  int s = 0;
  for (int v : k) s += v;
  return s;
}

int SingularFunction::strength() const { return 2 * l - dim() + k_total() + (times_coordinate >= 0 ? 1 : 0); }

double SingularFunction::Q(const double* y) const {
  double s = 0;
  for (int j = 0; j < dim(); ++j) s += y[j] * y[j] / a[j];
  return s;
}

cplx SingularFunction::base(const double* y) const {
  double q = Q(y);
  if (base_kind == Kind::RadialPower) return std::pow(q, -exponent);
  cplx v = p2(y);
  if (q > 0) v += p1(y) * std::log(q);
  return v;
}

bool SingularFunction::closed_form() const {
  if (k_total() == 0) return true;
  if (dim() == 2 && l == 1 && k[0] <= 1 && k[1] <= 1) return true;
  return false;
}

cplx SingularFunction::operator()(const double* y) const {
  cplx factor = times_coordinate >= 0 ? y[times_coordinate] : 1.0;
  if (k_total() == 0) return factor * base(y);
  if (closed_form()) {
    if (k[0] == 1 && k[1] == 0) return factor * phi1_k10(y, a[0], a[1]);
    if (k[0] == 0 && k[1] == 1) {
      double s[2] = {y[1], y[0]};
      return factor * phi1_k10(s, a[1], a[0]);
    }
    return factor * phi1_k11(y, a[0], a[1]);
  }
  // Cauchy repeated integration on top of the closest closed-form member.
  SingularFunction inner = *this;
  inner.times_coordinate = -1;
  int axis = -1;
  int m = 0;
  std::vector<int> kb = k;
  if (dim() == 2 && l == 1) {
    for (auto& v : kb) v = std::min(v, 1);
  } else {
    for (auto& v : kb) v = 0;
  }
  for (int j = 0; j < dim(); ++j)
    if (k[j] > kb[j]) {
      axis = j;
      m = k[j] - kb[j];
      break;
    }
  inner.k[axis] -= m;
  std::vector<double> yy(y, y + dim());
  const double yj = y[axis];
  const double fm = factorial(m - 1);
  cplx v = integrate_c(
      [&](double t) {
        std::vector<double> z = yy;
        z[axis] = t;
        return std::pow(yj - t, m - 1) / fm * inner(z.data());
      },
      yj);
  return factor * v;
}

cplx SingularFunction::at(const double* y_corner) const {
  std::vector<double> yl(dim());
  for (int j = 0; j < dim(); ++j) yl[j] = y_corner[p[j]];
  return (*this)(yl.data());
}

std::string SingularFunction::id() const {
  std::ostringstream os;
  os << "p=";
  for (int j = 0; j < dim(); ++j) os << (j ? "," : "") << p[j] + 1;
  os << ";l=" << l << ";k=";
  for (int j = 0; j < dim(); ++j) os << (j ? "," : "") << k[j];
  if (times_coordinate >= 0) os << ";times_y" << p[times_coordinate] + 1;
  return os.str();
}

SingularFunction phi_base(const std::vector<int>& p, int l, const std::vector<double>& a) {
  const int d = static_cast<int>(p.size());
  if (d < 2) throw Error("singular functions need |p| >= 2");
  if (l < 1) throw Error("singular functions need l >= 1");
  if (static_cast<int>(a.size()) != d) throw ShapeError("one coefficient a_j per axis of p is required");
  for (double v : a)
    if (!(v > 0)) throw Error("coefficients a_j must be positive");
  SingularFunction f;
  f.p = p;
  f.l = l;
  f.k.assign(d, 0);
  f.a = a;
  if (d % 2 == 1 || 2 * l < d) {
    f.kind = f.base_kind = SingularFunction::Kind::RadialPower;
    f.exponent = 0.5 * d - l;
    return f;
  }
  f.kind = f.base_kind = SingularFunction::Kind::PolyLog;
  int l0 = d / 2;
  f.p1 = Poly::constant(d, d == 2 ? cplx(0, -0.5) : cplx(0.5 * a[0]));
  f.p2 = Poly(d);
  for (int s = l0; s < l; ++s) polylog_step(a, f.p1, f.p2);
  return f;
}

SingularFunction phi_antiderivative(const SingularFunction& phi, const std::vector<int>& k) {
  if (phi.k_total() != 0 || phi.times_coordinate >= 0) throw Error("antiderivatives are taken of base functions");
  if (static_cast<int>(k.size()) != phi.dim()) throw ShapeError("k must have one entry per axis of p");
  for (int v : k)
    if (v < 0) throw Error("antiderivative orders must be nonnegative");
  SingularFunction f = phi;
  f.k = k;
  if (f.k_total() > 0) f.kind = SingularFunction::Kind::Antiderivative;
  return f;
}

DerivativeRelation phi_derivative(const SingularFunction& phi, int i) {
  if (i < 0 || i >= phi.dim()) throw ShapeError("derivative axis outside p");
  if (phi.times_coordinate >= 0) throw UnreducibleTermError("derivative of a coordinate product is not tracked");
  const int d = phi.dim();
  DerivativeRelation r;
  r.smooth = Poly(d);
  if (phi.k[i] >= 1) {
    r.target = phi;
    r.target.k[i] -= 1;
    if (r.target.k_total() == 0) r.target.kind = r.target.base_kind;
    return r;
  }
  if (phi.l == 1)
    throw UnreducibleTermError("d/dy" + std::to_string(phi.p[i] + 1) + " of " + phi.id() +
                               " leaves the singular family (k_i = 0, l = 1)");
  SingularFunction lower = phi_base(phi.p, phi.l - 1, phi.a);
  lower = phi_antiderivative(lower, phi.k);
  lower.times_coordinate = i;
  r.target = lower;
  const double ai = phi.a[i];
  if (phi.base_kind == SingularFunction::Kind::RadialPower) {
    // d/dy_i Q^{-e} = -e (2 / a_i) y_i Q^{-e-1}
    r.factor = -phi.exponent * 2.0 / ai;
    return r;
  }
  if (lower.base_kind == SingularFunction::Kind::RadialPower) {
    // l = d/2: d/dy_i (p1 log Q) = p1 (2 y_i / a_i) / Q
    r.factor = phi.p1.terms().begin()->second * 2.0 / ai;
    return r;
  }
  // PolyLog on both levels: d_i p1 = c y_i p1_{l-1}; p1 = Q S.
  Poly yi = Poly::variable(d, i);
  Poly dp1 = phi.p1.derivative(i);
  Poly ref = yi * lower.p1;
  cplx c = 0;
  for (const auto& [m, v] : ref.terms()) {
    c = dp1.coefficient(m) / v;
    break;
  }
  if (!(dp1 - ref * c).is_zero(1e-12 * (1 + std::abs(c))))
    throw Error("internal: log coefficient of the derivative is not proportional to y_i p1");
  r.factor = c;
  // p1 * 2 y_i / (a_i Q): p1 / Q = S recomputed by exact division in y_1.
  Poly S(d);
  {
    auto alpha = split_even(phi.p1);
    // p1 = sum alpha_k y0^{2k}, divisible by Q = (y0^2 - c)/a0 with c = -a0 Q'
    // Synthetic division in X = y0^2.
    int K = static_cast<int>(alpha.size()) - 1;
    std::vector<Poly> b(K + 1, Poly(d));
    Poly cq = neg_q_rest_pow(phi.a, 1);
    for (int kk = K; kk >= 1; --kk) {
      b[kk - 1] = alpha[kk] + (kk < K ? b[kk] * cq : Poly(d));
    }
    Poly y0 = Poly::variable(d, 0);
    for (int kk = 0; kk < K; ++kk) S += b[kk] * pow(y0 * y0, kk) * cplx(phi.a[0]);
  }
  r.smooth = S * yi * cplx(2.0 / ai) + phi.p2.derivative(i) - yi * lower.p2 * c;
  for (int j = 0; j < d; ++j)
    for (int m = 0; m < phi.k[j]; ++m) r.smooth = r.smooth.integral(j);
  return r;
}

cplx analytic_ft_constant(int d, int l, const std::vector<double>& a) {
  double sq = 1;
  for (double v : a) sq *= v;
  sq = std::sqrt(sq);
  const double pi = std::numbers::pi;
  if (d % 2 == 1 || 2 * l < d)
    return sq * std::pow(pi, 0.5 * d) * std::pow(2.0, 2 * l) * std::tgamma(l) / std::tgamma(0.5 * d - l);
  if (d == 2 && l == 1) return cplx(0, 2 * pi) * sq;
  return -2.0 * a[0] * (l - 1) * analytic_ft_constant(d, l - 1, a);
}

}  // namespace cornex
