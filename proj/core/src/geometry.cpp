#include "cornex/geometry.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "cornex/defaults.hpp"
#include "cornex/error.hpp"

namespace cornex {

namespace {

double parse_param(const std::string& preset, const std::string& name, double fallback) {
  auto pos = preset.find(':');
  if (pos == std::string::npos) return fallback;
  std::string s = preset.substr(pos + 1);
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw GeometryError("graph preset '" + preset + "': bad parameter for " + name);
  }
}

double norm2(const double* t, int d) {
  double s = 0;
  for (int i = 0; i < d; ++i) s += t[i] * t[i];
  return s;
}

}  // namespace

GraphFunction make_graph(const std::string& preset, int dim) {
  GraphFunction g;
  g.preset = preset;
  g.dim = dim;
  std::string kind = preset.substr(0, preset.find(':'));
  if (kind == "flat") {
    g.value = [](const double*) { return 0.0; };
    g.gradient = [dim](const double*, double* out) {
      for (int i = 0; i < dim; ++i) out[i] = 0;
    };
    g.hessian = [dim](const double*, double* out) {
      for (int i = 0; i < dim * dim; ++i) out[i] = 0;
    };
  } else if (kind == "paraboloid") {
    double a = parse_param(preset, "paraboloid", 1.0);
    g.value = [a, dim](const double* t) { return 0.5 * a * norm2(t, dim); };
    g.gradient = [a, dim](const double* t, double* out) {
      for (int i = 0; i < dim; ++i) out[i] = a * t[i];
    };
    g.hessian = [a, dim](const double*, double* out) {
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) out[i * dim + j] = i == j ? a : 0.0;
    };
  } else if (kind == "quartic") {
    double a = parse_param(preset, "quartic", 1.0);
    g.value = [a, dim](const double* t) {
      double r = norm2(t, dim);
      return a * r * r;
    };
    g.gradient = [a, dim](const double* t, double* out) {
      double r = norm2(t, dim);
      for (int i = 0; i < dim; ++i) out[i] = 4 * a * r * t[i];
    };
    g.hessian = [a, dim](const double* t, double* out) {
      double r = norm2(t, dim);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) out[i * dim + j] = 4 * a * ((i == j ? r : 0.0) + 2 * t[i] * t[j]);
    };
  } else if (kind == "disk") {
    double R = parse_param(preset, "disk", 1.0);
    if (R <= 0) throw GeometryError("graph preset '" + preset + "': radius must be positive");
    g.domain_radius = R;
    g.value = [R, dim](const double* t) { return R - std::sqrt(R * R - norm2(t, dim)); };
    g.gradient = [R, dim](const double* t, double* out) {
      double s = std::sqrt(R * R - norm2(t, dim));
      for (int i = 0; i < dim; ++i) out[i] = t[i] / s;
    };
    g.hessian = [R, dim](const double* t, double* out) {
      double s = std::sqrt(R * R - norm2(t, dim));
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
          out[i * dim + j] = (i == j ? 1.0 / s : 0.0) + t[i] * t[j] / (s * s * s);
    };
  } else if (kind == "linear") {
    double a = parse_param(preset, "linear", 1.0);
    g.value = [a, dim](const double* t) {
      double s = 0;
      for (int i = 0; i < dim; ++i) s += t[i];
      return a * s;
    };
    g.gradient = [a, dim](const double*, double* out) {
      for (int i = 0; i < dim; ++i) out[i] = a;
    };
    g.hessian = [dim](const double*, double* out) {
      for (int i = 0; i < dim * dim; ++i) out[i] = 0;
    };
  } else {
    throw GeometryError("unknown graph preset '" + preset + "'");
  }
  return g;
}

FactorSpec make_factor(const std::string& preset, int ambient_dim) {
  if (ambient_dim < 1) throw GeometryError("factor dimension must be >= 1");
  FactorSpec f;
  f.ambient_dim = ambient_dim;
  f.graph = make_graph(preset, ambient_dim - 1);
  return f;
}

double SpatialCutoff::operator()(double r2) const {
  double s = r2 / (radius * radius);
  if (s <= 0.25) return 1.0;
  if (s >= 1.0) return 0.0;
  double u = (s - 0.25) / 0.75;
  double g0 = std::exp(-1.0 / (1.0 - u));
  double g1 = std::exp(-1.0 / u);
  return g0 / (g0 + g1);
}

Series SpatialCutoff::series(double r2, int order) const {
  double s0 = r2 / (radius * radius);
  if (s0 <= 0.25) return Series(order, 1.0);
  if (s0 >= 1.0) return Series(order, 0.0);
  Series u = Series::variable(order, r2) * (1.0 / (radius * radius * 0.75));
  u[0] -= 0.25 / 0.75;
  Series one(order, 1.0);
  Series a = exp((-1.0) * reciprocal(one - u));
  Series b = exp((-1.0) * reciprocal(u));
  return a / (a + b);
}

int ProductDomainSpec::n() const {
  int n = 0;
  for (const auto& f : factors) n += f.ambient_dim;
  return n;
}

int ProductDomainSpec::tangential_offset(int i) const {
  int off = q();
  for (int k = 0; k < i; ++k) off += factors[k].tangential_dim();
  return off;
}

double ProductDomainSpec::cutoff(const double* x) const {
  double r2 = 0;
  for (int k = 0; k < n(); ++k) r2 += (x[k] - base_point[k]) * (x[k] - base_point[k]);
  return cutoff_profile()(r2);
}

void validate(const ProductDomainSpec& domain) {
  if (domain.q() < 2) throw GeometryError("product domain needs q >= 2 factors");
  if (static_cast<int>(domain.base_point.size()) != domain.n())
    throw GeometryError("base point has wrong dimension");
  if (!(domain.local_radius > 0)) throw GeometryError("local radius must be positive");
  std::mt19937_64 rng(12345);
  for (int i = 0; i < domain.q(); ++i) {
    const GraphFunction& g = domain.factors[i].graph;
    const int d = g.dim;
    if (d == 0) continue;
    std::vector<double> t(d, 0.0), grad(d), hess(d * d), gp(d), gm(d), tp(d);
    if (domain.require_normalized) {
      g.gradient(t.data(), grad.data());
      double gn = 0;
      for (double v : grad) gn += std::abs(v);
      if (std::abs(g.value(t.data())) > 1e-14 || gn > 1e-14)
        throw GeometryError("factor " + std::to_string(i + 1) + " (" + g.preset +
                            ") is not normalized: phi(0) and grad phi(0) must vanish");
    }
    double rad = 0.5 * std::min(domain.local_radius, g.domain_radius);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const double h = defaults::derivative_check_step;
    for (int s = 0; s < 16; ++s) {
      for (int k = 0; k < d; ++k) t[k] = rad * U(rng) / std::sqrt(static_cast<double>(d));
      g.gradient(t.data(), grad.data());
      g.hessian(t.data(), hess.data());
      double scale = 1.0 + std::abs(g.value(t.data()));
      for (int k = 0; k < d; ++k) {
        tp = t;
        tp[k] += h;
        double fp = g.value(tp.data());
        g.gradient(tp.data(), gp.data());
        tp[k] -= 2 * h;
        double fm = g.value(tp.data());
        g.gradient(tp.data(), gm.data());
        double fd = (fp - fm) / (2 * h);
        if (std::abs(fd - grad[k]) > 1e-6 * (scale + std::abs(grad[k])))
          throw GeometryError("factor " + std::to_string(i + 1) + " (" + g.preset +
                              "): supplied gradient inconsistent with finite differences");
        for (int m = 0; m < d; ++m) {
          double fdh = (gp[m] - gm[m]) / (2 * h);
          if (std::abs(fdh - hess[k * d + m]) > 1e-5 * (scale + std::abs(hess[k * d + m])))
            throw GeometryError("factor " + std::to_string(i + 1) + " (" + g.preset +
                                "): supplied Hessian inconsistent with finite differences");
        }
      }
    }
  }
}

ProductDomainSpec make_domain(const std::vector<std::string>& presets, const std::vector<int>& dims,
                              double local_radius) {
  if (presets.size() != dims.size()) throw GeometryError("preset and dimension lists differ in length");
  ProductDomainSpec d;
  for (std::size_t i = 0; i < presets.size(); ++i) d.factors.push_back(make_factor(presets[i], dims[i]));
  d.base_point.assign(d.n(), 0.0);
  d.local_radius = local_radius;
  return d;
}

TransformData::TransformData(ProductDomainSpec domain) : domain_(std::move(domain)) {}

std::vector<double> TransformData::graph_gradient(int i, const double* y) const {
  const auto& g = domain_.factors[i].graph;
  std::vector<double> grad(g.dim);
  if (g.dim) g.gradient(y + domain_.tangential_offset(i), grad.data());
  return grad;
}

double TransformData::graph_laplacian(int i, const double* y) const {
  const auto& g = domain_.factors[i].graph;
  if (!g.dim) return 0.0;
  std::vector<double> h(g.dim * g.dim);
  g.hessian(y + domain_.tangential_offset(i), h.data());
  double s = 0;
  for (int k = 0; k < g.dim; ++k) s += h[k * g.dim + k];
  return s;
}

Eigen::MatrixXd TransformData::jacobian(const double* y) const {
  const int n = domain_.n();
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < domain_.q(); ++i) {
    auto grad = graph_gradient(i, y);
    int off = domain_.tangential_offset(i);
    for (std::size_t m = 0; m < grad.size(); ++m) A(off + m, i) = -grad[m];
  }
  return A;
}

Eigen::MatrixXd TransformData::metric(const double* y) const {
  Eigen::MatrixXd A = jacobian(y);
  return A.transpose() * A;
}

Eigen::MatrixXd TransformData::metric_from_operator(const double* y) const {
  const int n = domain_.n();
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < domain_.q(); ++i) {
    g(i, i) = a(i, y);
    auto grad = graph_gradient(i, y);
    int off = domain_.tangential_offset(i);
    for (std::size_t m = 0; m < grad.size(); ++m) {
      g(i, off + m) = -grad[m];
      g(off + m, i) = -grad[m];
    }
  }
  return g;
}

double TransformData::a(int i, const double* y) const {
  double s = 1.0;
  for (double v : graph_gradient(i, y)) s += v * v;
  return s;
}

double TransformData::first_order_coeff(int i, const double* y) const { return -graph_laplacian(i, y); }

cplx TransformData::B(int i, const double* y, const double* xi) const {
  auto grad = graph_gradient(i, y);
  int off = domain_.tangential_offset(i) - domain_.q();
  double re = 0;
  for (std::size_t m = 0; m < grad.size(); ++m) re += 2 * grad[m] * xi[off + m];
  return {re, graph_laplacian(i, y)};
}

cplx TransformData::b_symbol(int i, const double* y, const double* xi) const {
  return cplx(0, 1) * B(i, y, xi);
}

double TransformData::C(const double*, const double* xi) const {
  double s = 0;
  for (int m = 0; m < domain_.n() - domain_.q(); ++m) s += xi[m] * xi[m];
  return s;
}

cplx TransformData::P(const double* y, const double* xi, const double* eta) const {
  cplx s = 0;
  for (int i = 0; i < domain_.q(); ++i) s += -a(i, y) * eta[i] * eta[i] + B(i, y, xi) * eta[i];
  return s - C(y, xi);
}

TransformData build_transform(const ProductDomainSpec& domain) {
  validate(domain);
  return TransformData(domain);
}

void to_model_unchecked(const ProductDomainSpec& domain, const double* x, double* y) {
  const int n = domain.n();
  for (int k = domain.q(); k < n; ++k) y[k] = x[k] - domain.base_point[k];
  for (int i = 0; i < domain.q(); ++i) {
    const auto& g = domain.factors[i].graph;
    double phi = g.dim ? g.value(y + domain.tangential_offset(i)) : 0.0;
    y[i] = x[i] - domain.base_point[i] - phi;
  }
}

void from_model_unchecked(const ProductDomainSpec& domain, const double* y, double* x) {
  const int n = domain.n();
  for (int k = domain.q(); k < n; ++k) x[k] = y[k] + domain.base_point[k];
  for (int i = 0; i < domain.q(); ++i) {
    const auto& g = domain.factors[i].graph;
    double phi = g.dim ? g.value(y + domain.tangential_offset(i)) : 0.0;
    x[i] = y[i] + domain.base_point[i] + phi;
  }
}

namespace {

void check_in_chart(const ProductDomainSpec& domain, const double* x) {
  double r2 = 0;
  for (int k = 0; k < domain.n(); ++k) r2 += (x[k] - domain.base_point[k]) * (x[k] - domain.base_point[k]);
  if (!(r2 < domain.local_radius * domain.local_radius)) {
    std::ostringstream os;
    os << "point at distance " << std::sqrt(r2) << " from the base point is outside U (radius "
       << domain.local_radius << ")";
    throw ChartError(os.str());
  }
  for (int i = 0; i < domain.q(); ++i) {
    const auto& g = domain.factors[i].graph;
    int off = domain.tangential_offset(i);
    double t2 = 0;
    for (int m = 0; m < g.dim; ++m) t2 += (x[off + m] - domain.base_point[off + m]) * (x[off + m] - domain.base_point[off + m]);
    if (g.dim && !(t2 < g.domain_radius * g.domain_radius))
      throw ChartError("tangential coordinates outside the graph domain of factor " + std::to_string(i + 1));
  }
}

}  // namespace

std::vector<double> to_model_coordinates(const ProductDomainSpec& domain, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != domain.n()) throw ShapeError("point has wrong dimension");
  check_in_chart(domain, x.data());
  std::vector<double> y(x.size());
  to_model_unchecked(domain, x.data(), y.data());
  return y;
}

std::vector<double> from_model_coordinates(const ProductDomainSpec& domain, const std::vector<double>& y) {
  if (static_cast<int>(y.size()) != domain.n()) throw ShapeError("point has wrong dimension");
  for (int i = 0; i < domain.q(); ++i) {
    const auto& g = domain.factors[i].graph;
    int off = domain.tangential_offset(i);
    double t2 = 0;
    for (int m = 0; m < g.dim; ++m) t2 += y[off + m] * y[off + m];
    if (g.dim && !(t2 < g.domain_radius * g.domain_radius))
      throw ChartError("tangential coordinates outside the graph domain of factor " + std::to_string(i + 1));
  }
  std::vector<double> x(y.size());
  from_model_unchecked(domain, y.data(), x.data());
  check_in_chart(domain, x.data());
  return x;
}

}  // namespace cornex
