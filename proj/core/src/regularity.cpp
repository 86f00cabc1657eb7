#include "cornex/regularity.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "cornex/defaults.hpp"
#include "cornex/error.hpp"

namespace cornex {

std::string to_string(Signature s) {
  switch (s) {
    case Signature::Bounded:
      return "bounded";
    case Signature::LogDivergent:
      return "log-divergent";
    case Signature::PowerDivergent:
      return "power-divergent";
    default:
      return "insufficient";
  }
}

bool RegularityReport::bounded_through(int m) const {
  bool any = false;
  for (const auto& o : orders) {
    if (o.order > m) continue;
    any = true;
    if (o.signature != Signature::Bounded) return false;
  }
  return any;
}

Signature RegularityReport::worst_through(int m) const {
  Signature w = Signature::Bounded;
  for (const auto& o : orders) {
    if (o.order > m) continue;
    if (o.signature == Signature::PowerDivergent) return o.signature;
    if (o.signature == Signature::LogDivergent || o.signature == Signature::Insufficient) w = o.signature;
  }
  return w;
}

std::vector<double> least_squares(const std::vector<std::vector<double>>& columns, const std::vector<double>& y,
                                  std::vector<double>* stderr_out, double* r2) {
  const int n = static_cast<int>(y.size()), p = static_cast<int>(columns.size());
  if (n <= p) throw FitError("least squares needs more samples than unknowns");
  Eigen::MatrixXd A(n, p);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    b(i) = y[i];
    for (int j = 0; j < p; ++j) A(i, j) = columns[j][i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  Eigen::VectorXd x = qr.solve(b);
  Eigen::VectorXd res = b - A * x;
  if (stderr_out) {
    double s2 = res.squaredNorm() / (n - p);
    Eigen::MatrixXd cov = (A.transpose() * A).inverse() * s2;
    stderr_out->resize(p);
    for (int j = 0; j < p; ++j) (*stderr_out)[j] = std::sqrt(std::max(cov(j, j), 0.0));
  }
  if (r2) {
    double mean = b.mean();
    double tot = (b.array() - mean).square().sum();
    *r2 = tot > 0 ? 1 - res.squaredNorm() / tot : 1.0;
  }
  return std::vector<double>(x.data(), x.data() + p);
}

OrderGrowth classify_growth(int order, const std::vector<double>& r, const std::vector<double>& D) {
  OrderGrowth g;
  g.order = order;
  const std::size_t n = r.size();
  if (n < 5) return g;
  std::vector<double> ones(n, 1.0), lr(n), lD(n), lg(n);
  double dmax = 0, dmin = INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    lr[i] = std::log(r[i]);
    lD[i] = std::log(std::max(D[i], 1e-300));
    lg[i] = -lr[i];
    dmax = std::max(dmax, D[i]);
    dmin = std::min(dmin, D[i]);
  }
  if (dmax == 0) {
    g.signature = Signature::Bounded;
    return g;
  }
  g.slope = least_squares({ones, lr}, lD, nullptr, &g.fit_r2)[1];
  std::vector<double> se;
  auto c = least_squares({ones, lg, r}, D, &se);
  g.log_coeff = c[1];
  g.log_stderr = se[1];
  double span = std::log(*std::max_element(r.begin(), r.end()) / *std::min_element(r.begin(), r.end()));
  // D at the smallest r against the largest r
  auto imin = std::min_element(r.begin(), r.end()) - r.begin();
  auto imax = std::max_element(r.begin(), r.end()) - r.begin();
  double growth = D[imin] / std::max(D[imax], 1e-300);
  if (g.slope < -0.5 && growth > 2) {
    g.signature = Signature::PowerDivergent;
  } else if (g.log_coeff > defaults::log_signature_sigmas * g.log_stderr && g.log_coeff * span > 0.1 * dmax) {
    g.signature = Signature::LogDivergent;
  } else {
    g.signature = Signature::Bounded;
  }
  return g;
}

TailFit tail_exponent(const SpectralField& F, double r_lo, double r_hi, int samples, double cap,
                      const std::vector<int>& axes) {
  const TensorGrid& g = F.grid;
  std::vector<int> ax = axes;
  if (ax.empty())
    for (int k = 0; k < g.q(); ++k)
      if (F.spectral[k]) ax.push_back(k);
  for (int k : ax)
    if (!F.spectral.at(k)) throw ShapeError("tail exponent axis is not spectral");
  // squared radius over spectral corner axes -> |F|^2
  std::vector<std::pair<double, double>> pts;
  pts.reserve(g.size());
  std::vector<int> idx(g.dims());
  double total = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.unflatten(i, idx.data());
    double r2 = 0;
    for (int k : ax) {
      double e = g.axis(k).freq(idx[k]);
      r2 += e * e;
    }
    double w = std::norm(F.values[i]);
    total += w;
    pts.emplace_back(std::sqrt(r2), w);
  }
  TailFit t;
  if (total == 0) {
    t.exponent = cap;
    t.capped = true;
    t.r2 = 1;
    return t;
  }
  std::sort(pts.begin(), pts.end());
  // suffix sums
  std::vector<double> suffix(pts.size() + 1, 0.0);
  for (std::size_t i = pts.size(); i-- > 0;) suffix[i] = suffix[i + 1] + pts[i].second;
  std::vector<double> lr, lE;
  const double floor = 1e-28 * total;
  for (int s = 0; s < samples; ++s) {
    double R = r_lo * std::pow(r_hi / r_lo, s / double(samples - 1));
    auto it = std::lower_bound(pts.begin(), pts.end(), std::make_pair(R, -std::numeric_limits<double>::infinity()));
    double E2 = suffix[it - pts.begin()];
    if (E2 <= floor) break;
    lr.push_back(std::log(R));
    lE.push_back(0.5 * std::log(E2));
  }
  if (lr.size() < 3) {
    t.exponent = cap;
    t.capped = true;
    t.r2 = 1;
    return t;
  }
  std::vector<double> ones(lr.size(), 1.0);
  auto c = least_squares({ones, lr}, lE, nullptr, &t.r2);
  t.exponent = -c[1];
  if (t.exponent > cap) {
    t.exponent = cap;
    t.capped = true;
  }
  return t;
}

double sobolev_index(const SpectralField& F, double r_hi, double lo, double hi, double xi_band) {
  const TensorGrid& g = F.grid;
  for (bool s : F.spectral)
    if (!s) throw ShapeError("sobolev index needs a fully spectral field");
  std::vector<std::pair<double, double>> inner, outer;  // (1 + |zeta|^2, |F|^2)
  std::vector<int> idx(g.dims());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.unflatten(i, idx.data());
    double z2 = 0, x2 = 0;
    for (int k = 0; k < g.dims(); ++k) {
      double e = g.axis(k).freq(idx[k]);
      z2 += e * e;
      if (k >= g.q()) x2 += e * e;
    }
    if (x2 > xi_band * xi_band) continue;
    double z = std::sqrt(z2);
    double w = std::norm(F.values[i]);
    if (z >= r_hi / 4 && z < r_hi / 2) inner.emplace_back(1 + z2, w);
    if (z >= r_hi / 2 && z < r_hi) outer.emplace_back(1 + z2, w);
  }
  auto energy = [](const std::vector<std::pair<double, double>>& v, double s) {
    double e = 0;
    for (auto [z, w] : v) e += std::pow(z, s) * w;
    return e;
  };
  auto ratio = [&](double s) {
    double ei = energy(inner, s);
    return ei > 0 ? energy(outer, s) / ei : INFINITY;
  };
  if (energy(outer, 0) == 0) return hi;
  if (ratio(lo) >= 1) return lo;
  if (ratio(hi) < 1) return hi;
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    (ratio(mid) < 1 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

OrderGrowth plane_growth(const GridFunction& u, int axis, int order, double window) {
  const TensorGrid& g = u.grid;
  const Axis& ax = g.axis(axis);
  const int z = ax.zero_index();
  if (z < 0) throw ShapeError("plane growth needs a node-centered axis");
  const double h = ax.spacing();
  std::vector<double> rs, Ds;
  std::vector<int> idx(g.dims());
  const int kmax = std::min(ax.nodes - 1 - order, z + static_cast<int>(window / h));
  for (int k = z + 1; k <= kmax; ++k) {
    double worst = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      g.unflatten(i, idx.data());
      if (idx[axis] != k) continue;
      bool inside = true;
      for (int d = 0; d < g.dims(); ++d)
        if (d != axis && std::abs(g.axis(d).node(idx[d])) > window) inside = false;
      if (!inside) continue;
      // forward differences reaching away from the plane
      cplx s = 0;
      double binom = 1;
      for (int j = 0; j <= order; ++j) {
        int kk = k + j;
        idx[axis] = kk;
        double sign = ((order - j) % 2) ? -1.0 : 1.0;
        s += sign * binom * u.values[g.flatten(idx.data())];
        binom = binom * (order - j) / (j + 1);
      }
      worst = std::max(worst, std::abs(s) / std::pow(h, order));
    }
    rs.push_back(ax.node(k));
    Ds.push_back(worst);
  }
  return classify_growth(order, rs, Ds);
}

}  // namespace cornex
