#include "cornex/ft_check.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>

#include "cornex/error.hpp"
#include "cornex/grid.hpp"

namespace cornex {

bool SmoothRemainderMeasure::certified_through(int m) const {
  for (std::size_t i = 0; i < orders.size(); ++i)
    if (orders[i] <= m && !certified[i]) return false;
  return !orders.empty();
}

void certify(SmoothRemainderMeasure& m) {
  m.certified.assign(m.orders.size(), false);
  for (std::size_t i = 0; i < m.orders.size(); ++i) {
    double var = (m.fine[i] - m.coarse[i]) / std::max(m.coarse[i], 1e-300);
    bool floor = i < m.reference.size() && m.fine[i] <= m.floor_ratio * m.reference[i];
    m.certified[i] = var < m.variation_tol || floor;
  }
}

FtCheckConfig default_ft_config(int dims) {
  FtCheckConfig c;
  if (dims == 2) return c;
  if (dims == 3) {
    c.coarse = {96, 16};
    c.fine = {128, 21};
    c.half_length = 4;
    c.cutoff_center = 1.8;
    c.cutoff_width = 0.8;
    c.ring_lo = 6;
    c.axis_r0 = 1;
    c.axis_r1 = 2;
    return c;
  }
  c.coarse = {32, 10};
  c.fine = {48, 15};
  c.half_length = 4;
  c.cutoff_center = 1.8;
  c.cutoff_width = 0.8;
  c.ring_lo = 6;
  c.axis_r0 = 1;
  c.axis_r1 = 2;
  return c;
}

cplx ft_target(const SingularFunction& phi, const double* eta) {
  double s = 0;
  cplx ek = 1;
  for (int j = 0; j < phi.dim(); ++j) {
    s += phi.a[j] * eta[j] * eta[j];
    for (int m = 0; m < phi.k[j]; ++m) ek *= eta[j];
  }
  return 1.0 / (ek * std::pow(s, phi.l));
}

namespace {

double axis_cut(const FtCheckConfig& cfg, double e) {
  return smoothstep7((std::abs(e) - cfg.axis_r0) / (cfg.axis_r1 - cfg.axis_r0));
}

std::vector<double> max_differences(const SpectralField& f, const std::vector<int>& orders, int half) {
  const TensorGrid& g = f.grid;
  const int d = g.dims();
  const int M = g.axis(0).nodes;
  const double h = g.axis(0).spacing();
  std::vector<double> out;
  for (int m : orders) {
    double best = 0;
    std::vector<int> idx(d);
    int side = 2 * half;
    std::size_t count = 1;
    for (int k = 0; k < d; ++k) count *= side;
    for (std::size_t c = 0; c < count; ++c) {
      std::size_t r = c;
      for (int k = 0; k < d; ++k) {
        idx[k] = M / 2 - half + static_cast<int>(r % side);
        r /= side;
      }
      for (int ax = 0; ax < d; ++ax) {
        cplx s = 0;
        double binom = 1;
        for (int j = 0; j <= m; ++j) {
          std::vector<int> id2 = idx;
          id2[ax] = (idx[ax] + j) % M;
          double sign = ((m - j) % 2) ? -1.0 : 1.0;
          s += sign * binom * f.values[g.flatten(id2.data())];
          binom = binom * (m - j) / (j + 1);
        }
        best = std::max(best, std::abs(s) / std::pow(h, m));
      }
    }
    out.push_back(best);
  }
  return out;
}

}  // namespace

FtFit ft_fit(const SingularFunction& phi, const FtCheckConfig& cfg, const FtGrid& fg, bool measure) {
  const int d = phi.dim();
  TensorGrid g = TensorGrid::uniform(d, d, fg.nodes, cfg.half_length, Centering::Cell);
  auto samples = GridFunction::sample(g, [&](const double* y) {
    double r = 0;
    for (int j = 0; j < d; ++j) r += y[j] * y[j];
    r = std::sqrt(r);
    double chi = 0.5 * std::erfc((r - cfg.cutoff_center) / cfg.cutoff_width);
    if (chi < 1e-300) return cplx(0);
    return chi * phi(y);
  });
  SpectralField G = partial_ft(samples, [&] {
    std::vector<int> ax(d);
    for (int j = 0; j < d; ++j) ax[j] = j;
    return ax;
  }());

  FtFit fit;
  // parity against (-1)^{k_i}
  {
    double gmax = G.max_abs();
    std::vector<int> idx(d);
    double worst = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      g.unflatten(i, idx.data());
      for (int ax = 0; ax < d; ++ax) {
        std::vector<int> id2 = idx;
        id2[ax] = (fg.nodes - idx[ax]) % fg.nodes;
        if (id2[ax] == idx[ax]) continue;
        double sign = phi.k[ax] % 2 ? -1.0 : 1.0;
        worst = std::max(worst, std::abs(G.values[i] - sign * G.values[g.flatten(id2.data())]));
      }
    }
    fit.parity_error = gmax > 0 ? worst / gmax : 0.0;
  }

  const int ncol = 2 + d;
  std::vector<std::size_t> rows;
  std::vector<int> idx(d);
  std::vector<double> eta(d);
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.unflatten(i, idx.data());
    double r2 = 0, chi = 1;
    for (int j = 0; j < d; ++j) {
      eta[j] = g.axis(j).freq(idx[j]);
      r2 += eta[j] * eta[j];
      chi *= axis_cut(cfg, eta[j]);
    }
    double r = std::sqrt(r2);
    if (r >= cfg.ring_lo && r <= fg.band && chi >= 1.0) rows.push_back(i);
  }
  if (rows.size() < static_cast<std::size_t>(4 * ncol))
    throw FitError("ft_check: fitting annulus holds too few grid frequencies");
  fit.points = rows.size();
  Eigen::MatrixXcd A(rows.size(), ncol);
  Eigen::VectorXcd b(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    g.unflatten(rows[r], idx.data());
    cplx ek = 1;
    for (int j = 0; j < d; ++j) {
      eta[j] = g.axis(j).freq(idx[j]);
      for (int m = 0; m < phi.k[j]; ++m) ek *= eta[j];
    }
    A(r, 0) = ft_target(phi, eta.data());
    A(r, 1) = 1.0 / ek;
    for (int j = 0; j < d; ++j) A(r, 2 + j) = eta[j] * eta[j] / ek;
    b(r) = G.values[rows[r]];
  }
  Eigen::VectorXd scale(ncol);
  for (int c = 0; c < ncol; ++c) {
    scale(c) = A.col(c).cwiseAbs().maxCoeff();
    A.col(c) /= scale(c);
  }
  Eigen::VectorXcd coef = A.colPivHouseholderQr().solve(b);
  fit.residual = (A * coef - b).norm() / b.norm();
  for (int c = 0; c < ncol; ++c) coef(c) /= scale(c);
  fit.c = coef(0);
  if (!measure) return fit;

  SpectralField rem = G, sing = G;
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.unflatten(i, idx.data());
    double r2 = 0, chi = 1;
    cplx ek = 1;
    for (int j = 0; j < d; ++j) {
      eta[j] = g.axis(j).freq(idx[j]);
      r2 += eta[j] * eta[j];
      chi *= axis_cut(cfg, eta[j]);
      for (int m = 0; m < phi.k[j]; ++m) ek *= eta[j];
    }
    double r = std::sqrt(r2);
    double w = 1 - smoothstep7((r - 0.8 * fg.band) / (0.2 * fg.band));
    if (chi == 0 || w == 0) {
      rem.values[i] = sing.values[i] = 0;
      continue;
    }
    cplx T = ft_target(phi, eta.data());
    cplx alias = coef(1) / ek;
    for (int j = 0; j < d; ++j) alias += coef(2 + j) * eta[j] * eta[j] / ek;
    rem.values[i] = chi * w * (G.values[i] - fit.c * T - alias);
    sing.values[i] = chi * w * fit.c * T;
  }
  std::vector<int> all(d);
  for (int j = 0; j < d; ++j) all[j] = j;
  fit.diff_remainder = max_differences(partial_ift(rem, all), cfg.orders, cfg.probe_half_width);
  fit.diff_singular = max_differences(partial_ift(sing, all), cfg.orders, cfg.probe_half_width);
  return fit;
}

FtCheckResult ft_check(const SingularFunction& phi, const FtCheckConfig& cfg) {
  FtCheckResult r;
  r.id = phi.id();
  r.coarse = ft_fit(phi, cfg, cfg.coarse, true);
  r.fine = ft_fit(phi, cfg, cfg.fine, true);
  r.stability = std::abs(r.fine.c - r.coarse.c) / std::abs(r.fine.c);
  r.remainder.orders = cfg.orders;
  r.remainder.coarse = r.coarse.diff_remainder;
  r.remainder.fine = r.fine.diff_remainder;
  r.remainder.reference = r.fine.diff_singular;
  certify(r.remainder);
  bool fit_ok = r.coarse.residual < cfg.residual_tol && r.fine.residual < cfg.residual_tol;
  bool stable = r.stability < cfg.stability_tol;
  r.passed = fit_ok && stable && r.remainder.certified_through(cfg.orders.back());
  if (!fit_ok) r.note = "fit residual above threshold";
  else if (!stable) r.note = "fitted constant not stable across grids";
  else if (!r.passed) r.note = "remainder not certified smooth";
  return r;
}

cplx normalization_constant(int dims, int l, const std::vector<int>& k, const std::vector<double>& a) {
  static std::mutex mu;
  static std::map<std::pair<std::pair<int, int>, std::vector<double>>, cplx> cache;
  auto key = std::make_pair(std::make_pair(dims, l), a);
  cplx c0;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) c0 = it->second;
  }
  if (c0 == cplx(0)) {
    std::vector<int> p(dims);
    for (int j = 0; j < dims; ++j) p[j] = j;
    auto phi = phi_base(p, l, a);
    auto cfg = default_ft_config(dims);
    c0 = ft_fit(phi, cfg, cfg.coarse, false).c;
    std::lock_guard<std::mutex> lock(mu);
    cache[key] = c0;
  }
  int kt = 0;
  for (int v : k) kt += v;
  cplx ik = 1;
  for (int m = 0; m < kt; ++m) ik *= cplx(0, 1);
  return ik * c0;
}

}  // namespace cornex
