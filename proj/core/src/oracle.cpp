#include "cornex/oracle.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include "cornex/error.hpp"
#include "cornex/parallel.hpp"

namespace cornex {

namespace {

constexpr double pi = std::numbers::pi;

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

/// Zeros of J_0, shared between solves.
const std::vector<double>& j0_zeros(int count) {
  static std::mutex m;
  static std::vector<double> cache;
  std::lock_guard<std::mutex> lock(m);
  if (static_cast<int>(cache.size()) < count) cache = bessel_zeros(0, count);
  return cache;
}

}  // namespace

std::string FactorShape::id() const {
  return (kind == FactorKind::Interval ? "interval:" : "disk:") + fmt(size);
}

int OracleDomain::dim() const {
  int d = 0;
  for (const auto& f : factors) d += f.dim();
  return d;
}

std::string OracleDomain::id() const {
  std::string s;
  for (std::size_t i = 0; i < factors.size(); ++i) s += (i ? "," : "") + factors[i].id();
  return s;
}

std::vector<double> OracleDomain::boundary_distance(const double* x) const {
  std::vector<double> d;
  for (const auto& f : factors) {
    if (f.kind == FactorKind::Interval) {
      d.push_back(std::min(x[0], f.size - x[0]));
      x += 1;
    } else {
      d.push_back(f.size - std::hypot(x[0], x[1]));
      x += 2;
    }
  }
  return d;
}

std::vector<double> OracleDomain::transverse_point(double y1, double y2) const {
  if (factors.size() != 2) throw ShapeError("transverse plane needs a two-factor domain");
  std::vector<double> x;
  const double y[2] = {y1, y2};
  for (int i = 0; i < 2; ++i) {
    if (factors[i].kind == FactorKind::Interval) {
      x.push_back(y[i]);
    } else {
      x.push_back(factors[i].size - y[i]);
      x.push_back(0.0);
    }
  }
  return x;
}

OracleDomain OracleDomain::parse(const std::string& s) {
  if (s == "square") return parse("interval:1,interval:1");
  if (s == "disks") return parse("disk:1,disk:1");
  if (s == "disk-interval") return parse("disk:1,interval:1");
  OracleDomain d;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    FactorShape f;
    auto colon = item.find(':');
    std::string kind = item.substr(0, colon);
    if (kind == "interval")
      f.kind = FactorKind::Interval;
    else if (kind == "disk")
      f.kind = FactorKind::Disk;
    else
      throw ShapeError("unknown oracle factor '" + item + "'");
    if (colon != std::string::npos) f.size = std::stod(item.substr(colon + 1));
    if (!(f.size > 0)) throw ShapeError("oracle factor size must be positive: " + item);
    d.factors.push_back(f);
  }
  if (d.factors.empty()) throw ShapeError("empty oracle domain");
  return d;
}

FactorEigenBasis FactorEigenBasis::build(const FactorShape& shape, int mode_cap) {
  if (mode_cap < 1) throw ShapeError("mode cap must be positive");
  FactorEigenBasis b;
  b.shape_ = shape;
  const double L = shape.size;
  if (shape.kind == FactorKind::Interval) {
    for (int n = 1; n <= mode_cap; ++n) {
      EigenMode m;
      m.radial = n;
      m.lambda = std::pow(n * pi / L, 2);
      m.norm = std::sqrt(2 / L);
      b.modes_.push_back(m);
    }
    gauss_legendre(2 * mode_cap + 40, 0, L, b.nodes_, b.weights_);
    return b;
  }
  // Weyl count j < X holds about X^2 / 4 modes
  const double X = 2.4 * std::sqrt(static_cast<double>(mode_cap)) + 6;
  int nmax = 0;
  for (int n = 0; n < X; ++n) {
    int count = static_cast<int>((X - n) / pi) + 2;
    auto z = bessel_zeros(n, count);
    for (int k = 0; k < count; ++k) {
      if (z[k] >= X) break;
      for (int s = 0; s < (n == 0 ? 1 : 2); ++s) {
        EigenMode m;
        m.angular = n;
        m.radial = k + 1;
        m.sine = s == 1;
        m.zero = z[k];
        m.lambda = std::pow(z[k] / L, 2);
        m.norm = 1 / (L * std::abs(std::cyl_bessel_j(n + 1.0, z[k])) * std::sqrt(pi * (n == 0 ? 2 : 1) / 2));
        b.modes_.push_back(m);
        nmax = std::max(nmax, n);
      }
    }
  }
  std::stable_sort(b.modes_.begin(), b.modes_.end(),
                   [](const EigenMode& p, const EigenMode& q) { return p.lambda < q.lambda; });
  if (static_cast<int>(b.modes_.size()) > mode_cap) b.modes_.resize(mode_cap);
  nmax = 0;
  double zmax = 0;
  for (const auto& m : b.modes_) {
    nmax = std::max(nmax, m.angular);
    zmax = std::max(zmax, m.zero);
  }
  std::vector<double> r, wr;
  gauss_legendre(static_cast<int>(zmax) + 24, 0, L, r, wr);
  const int nt = 2 * nmax + 4;
  for (std::size_t i = 0; i < r.size(); ++i)
    for (int t = 0; t < nt; ++t) {
      double th = 2 * pi * t / nt;
      b.nodes_.push_back(r[i] * std::cos(th));
      b.nodes_.push_back(r[i] * std::sin(th));
      b.weights_.push_back(wr[i] * r[i] * 2 * pi / nt);
    }
  return b;
}

double FactorEigenBasis::eval(int m, const double* x) const {
  const EigenMode& e = modes_[m];
  if (shape_.kind == FactorKind::Interval) return e.norm * std::sin(e.radial * pi * x[0] / shape_.size);
  double r = std::hypot(x[0], x[1]);
  double ang = e.angular == 0 ? 1.0
                              : (e.sine ? std::sin(e.angular * std::atan2(x[1], x[0]))
                                        : std::cos(e.angular * std::atan2(x[1], x[0])));
  return e.norm * std::cyl_bessel_j(static_cast<double>(e.angular), e.zero * r / shape_.size) * ang;
}

std::vector<double> FactorEigenBasis::project(const PointFunction& g) const {
  std::vector<double> c(modes_.size(), 0.0);
  for (int i = 0; i < quadrature_size(); ++i) {
    double v = g(node(i)) * weights_[i];
    if (v == 0) continue;
    for (int m = 0; m < size(); ++m) c[m] += v * eval(m, node(i));
  }
  return c;
}

double FactorEigenBasis::orthonormality_defect() const {
  const int M = size(), Q = quadrature_size();
  Eigen::MatrixXd V(Q, M);
  for (int i = 0; i < Q; ++i)
    for (int m = 0; m < M; ++m) V(i, m) = eval(m, node(i)) * std::sqrt(weights_[i]);
  Eigen::MatrixXd G = V.transpose() * V - Eigen::MatrixXd::Identity(M, M);
  return G.cwiseAbs().maxCoeff();
}

OracleData OracleData::uniform(double c) {
  OracleData d;
  d.constant = true;
  d.value = c;
  d.f = [c](const double*) { return c; };
  return d;
}

OracleData OracleData::function(PointFunction f) {
  OracleData d;
  d.f = std::move(f);
  return d;
}

PlaneFunction OracleSolution::transverse() const {
  auto eval = evaluate;
  auto dom = domain;
  return [eval, dom](double y1, double y2) {
    auto x = dom.transverse_point(y1, y2);
    return eval(x.data());
  };
}

namespace {

OracleSolution modal_solve(const OracleDomain& domain, const OracleData& data, int cap) {
  auto B1 = std::make_shared<FactorEigenBasis>(FactorEigenBasis::build(domain.factors[0], cap));
  auto B2 = std::make_shared<FactorEigenBasis>(FactorEigenBasis::build(domain.factors[1], cap));
  const int M = B1->size(), N = B2->size(), d1 = domain.factors[0].dim(), d2 = domain.factors[1].dim();
  const int Q1 = B1->quadrature_size(), Q2 = B2->quadrature_size();
  Eigen::MatrixXd V1(Q1, M), V2(Q2, N), Fq(Q1, Q2);
  for (int a = 0; a < Q1; ++a)
    for (int m = 0; m < M; ++m) V1(a, m) = B1->eval(m, B1->node(a)) * B1->weight(a);
  for (int b = 0; b < Q2; ++b)
    for (int n = 0; n < N; ++n) V2(b, n) = B2->eval(n, B2->node(b)) * B2->weight(b);
  parallel_for(Q1, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> x(d1 + d2);
    for (std::size_t a = lo; a < hi; ++a) {
      std::copy(B1->node(a), B1->node(a) + d1, x.begin());
      for (int b = 0; b < Q2; ++b) {
        std::copy(B2->node(b), B2->node(b) + d2, x.begin() + d1);
        Fq(a, b) = data.f(x.data());
      }
    }
  });
  Eigen::MatrixXd F = V1.transpose() * Fq * V2;
  auto U = std::make_shared<Eigen::MatrixXd>(M, N);
  for (int m = 0; m < M; ++m)
    for (int n = 0; n < N; ++n) (*U)(m, n) = -F(m, n) / (B1->lambda(m) + B2->lambda(n));

  OracleSolution s;
  s.domain = domain;
  s.domain_id = domain.id();
  s.method = "modal";
  s.mode_cap = cap;
  s.shape = {M, N};
  s.coefficients.resize(static_cast<std::size_t>(M) * N);
  for (int m = 0; m < M; ++m)
    for (int n = 0; n < N; ++n) s.coefficients[static_cast<std::size_t>(m) * N + n] = (*U)(m, n);
  auto values = [B1, B2, d1](const double* x, Eigen::VectorXd& p, Eigen::VectorXd& q) {
    p.resize(B1->size());
    q.resize(B2->size());
    for (int m = 0; m < B1->size(); ++m) p(m) = B1->eval(m, x);
    for (int n = 0; n < B2->size(); ++n) q(n) = B2->eval(n, x + d1);
  };
  s.evaluate = [U, values](const double* x) {
    Eigen::VectorXd p, q;
    values(x, p, q);
    return p.dot(*U * q);
  };
  // the last quarter of the modes in either factor
  s.tail = [U, values, M, N](const double* x) {
    Eigen::VectorXd p, q;
    values(x, p, q);
    double t = 0;
    for (int m = 0; m < M; ++m)
      for (int n = 0; n < N; ++n)
        if (4 * m >= 3 * M || 4 * n >= 3 * N) t += std::abs((*U)(m, n) * p(m) * q(n));
    return t;
  };
  return s;
}

/// Uniform data: u = c (-p(x_s) + sum_n g_n(x_s) rho_n(x_r)) with the modes
/// of the summed factor s, p its Poisson solution of -Delta p = 1, and
/// rho_n the resolvent profile (mu_n - Delta) rho = 0, rho = 1 on the
/// boundary of the other factor r.
OracleSolution resolvent_solve(const OracleDomain& domain, double c, int cap) {
  const int s = domain.factors[0].kind == FactorKind::Interval ? 0 : 1;
  const int r = 1 - s;
  const FactorShape S = domain.factors[s], R = domain.factors[r];
  const int off_s = s == 0 ? 0 : domain.factors[0].dim();
  const int off_r = r == 0 ? 0 : domain.factors[0].dim();

  // per mode: sqrt(mu_n) and the coefficient of the mode-side profile
  auto root = std::make_shared<std::vector<double>>();
  auto coef = std::make_shared<std::vector<double>>();
  auto zeros = std::make_shared<std::vector<double>>();
  const double Ls = S.size;
  if (S.kind == FactorKind::Interval) {
    for (int n = 1; static_cast<int>(root->size()) < cap; n += 2) {
      root->push_back(n * pi / Ls);
      coef->push_back(4 * Ls * Ls / std::pow(n * pi, 3));
      zeros->push_back(n);
    }
  } else {
    const auto& z = j0_zeros(cap);
    for (int k = 0; k < cap; ++k) {
      root->push_back(z[k] / Ls);
      coef->push_back(2 * Ls * Ls / (std::pow(z[k], 3) * std::cyl_bessel_j(1.0, z[k])));
      zeros->push_back(z[k]);
    }
  }
  auto mode_profile = [S, zeros](int n, const double* x) {
    if (S.kind == FactorKind::Interval) return std::sin((*zeros)[n] * pi * x[0] / S.size);
    return std::cyl_bessel_j(0.0, (*zeros)[n] * std::hypot(x[0], x[1]) / S.size);
  };
  auto poisson = [S](const double* x) {
    if (S.kind == FactorKind::Interval) return 0.5 * x[0] * (S.size - x[0]);
    double rr = x[0] * x[0] + x[1] * x[1];
    return 0.25 * (S.size * S.size - rr);
  };
  // rho for root k at the r-side component; dist = distance to its boundary
  auto rho = [R](double k, const double* x) {
    if (R.kind == FactorKind::Interval) {
      double L = R.size, t = x[0];
      return (std::exp(-k * t) + std::exp(-k * (L - t))) / (1 + std::exp(-k * L));
    }
    double rad = std::hypot(x[0], x[1]);
    return std::exp(k * (rad - R.size)) * bessel_i0_scaled(k * rad) / bessel_i0_scaled(k * R.size);
  };
  auto dist = [R](const double* x) {
    if (R.kind == FactorKind::Interval) return std::min(x[0], R.size - x[0]);
    return R.size - std::hypot(x[0], x[1]);
  };
  // modes needed: rho_n decays like exp(-sqrt(mu_n) dist)
  constexpr double decay = 45.0;
  auto terms = [root, cap](double d) {
    auto it = std::upper_bound(root->begin(), root->end(), decay / d);
    return std::min<int>(cap, static_cast<int>(it - root->begin()) + 1);
  };

  OracleSolution sol;
  sol.domain = domain;
  sol.domain_id = domain.id();
  sol.method = "resolvent";
  sol.mode_cap = cap;
  sol.evaluate = [=](const double* x) {
    const double* xs = x + off_s;
    const double* xr = x + off_r;
    double d = dist(xr);
    if (d <= 0) return 0.0;
    int n_use = terms(d);
    double sum = 0;
    for (int n = n_use - 1; n >= 0; --n) sum += (*coef)[n] * mode_profile(n, xs) * rho((*root)[n], xr);
    return c * (sum - poisson(xs));
  };
  sol.tail = [=](const double* x) {
    double d = dist(x + off_r);
    if (d <= 0) return 0.0;
    int n_use = terms(d);
    if (n_use < cap) return 0.0;
    // geometric bound on the neglected terms
    double k = root->back(), dk = (*root)[cap - 1] - (*root)[cap - 2];
    return std::abs(c * coef->back()) * std::exp(-k * d) / (1 - std::exp(-dk * d));
  };
  return sol;
}

}  // namespace

OracleSolution tensor_solve(const OracleDomain& domain, const OracleData& f, int mode_cap, int resolvent_cap) {
  if (domain.factors.size() != 2) throw ShapeError("tensor_solve supports two-factor products");
  if (!f.f && !f.constant) throw ShapeError("oracle data is not evaluable");
  if (f.constant) return resolvent_solve(domain, f.value, resolvent_cap);
  return modal_solve(domain, f, mode_cap);
}

double FdSolution::operator()(double x, double y) const {
  double fx = std::clamp(x / h, 0.0, static_cast<double>(n)), fy = std::clamp(y / h, 0.0, static_cast<double>(n));
  int i = std::min(static_cast<int>(fx), n - 1), j = std::min(static_cast<int>(fy), n - 1);
  double s = fx - i, t = fy - j;
  return (1 - s) * (1 - t) * node(i, j) + s * (1 - t) * node(i + 1, j) + (1 - s) * t * node(i, j + 1) +
         s * t * node(i + 1, j + 1);
}

FdSolution fd_solve(const OracleDomain& square, const std::function<double(double, double)>& f, int n) {
  if (square.factors.size() != 2 || square.factors[0].kind != FactorKind::Interval ||
      square.factors[1].kind != FactorKind::Interval || square.factors[0].size != square.factors[1].size)
    throw ShapeError("fd_solve needs a square of two equal intervals");
  if (n < 2) throw ShapeError("fd_solve needs at least two intervals per side");
  FdSolution s;
  s.n = n;
  s.h = square.factors[0].size / n;
  const int m = n - 1;
  auto id = [m](int i, int j) { return (i - 1) * m + (j - 1); };
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs(m * m);
  const double h2 = s.h * s.h;
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j) {
      int k = id(i, j);
      trip.emplace_back(k, k, 4 / h2);
      if (i > 1) trip.emplace_back(k, id(i - 1, j), -1 / h2);
      if (i < m) trip.emplace_back(k, id(i + 1, j), -1 / h2);
      if (j > 1) trip.emplace_back(k, id(i, j - 1), -1 / h2);
      if (j < m) trip.emplace_back(k, id(i, j + 1), -1 / h2);
      rhs(k) = -f(i * s.h, j * s.h);
    }
  Eigen::SparseMatrix<double> A(m * m, m * m);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
  Eigen::VectorXd u = ldlt.solve(rhs);
  s.values.assign(static_cast<std::size_t>(n + 1) * (n + 1), 0.0);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j) s.values[static_cast<std::size_t>(i) * (n + 1) + j] = u(id(i, j));
  return s;
}

}  // namespace cornex
