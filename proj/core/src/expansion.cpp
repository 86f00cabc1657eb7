#include "cornex/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cornex/error.hpp"
#include "cornex/parallel.hpp"

namespace cornex {

TensorGrid make_expansion_grid(const ProductDomainSpec& domain, const ExpansionGridSpec& spec) {
  const double L = spec.half_length > 0 ? spec.half_length : defaults::box_factor * domain.local_radius;
  std::vector<Axis> axes;
  for (int i = 0; i < domain.q(); ++i) axes.push_back(Axis{spec.corner_nodes, L, Centering::Node});
  const double T = spec.tangential_half_length > 0 ? spec.tangential_half_length
                                                  : defaults::tangential_box_factor * domain.local_radius;
  for (int k = domain.q(); k < domain.n(); ++k) axes.push_back(Axis{spec.tangential_nodes, T, Centering::Node});
  return TensorGrid(axes, domain.q());
}

TermMeta TermMeta::for_index(int j, int q) {
  TermMeta m;
  m.index = j;
  m.denominator_power = 3 * j + 1;
  m.eta_degree_bound = 5 * j;
  m.reduced_denominator = j + 1;
  m.reduced_degree = j;
  m.parity.assign(q, Parity::Odd);
  return m;
}

ExpansionContext::ExpansionContext(const ProductDomainSpec& domain, const ExpansionGridSpec& spec)
    : transform_(build_transform(domain)), grid_(make_expansion_grid(domain, spec)), cutoff_(default_frequency_cutoff(grid_)) {
  precompute();
}

ExpansionContext::ExpansionContext(const ProductDomainSpec& domain, const TensorGrid& grid, const CutoffSpec& cutoff)
    : transform_(build_transform(domain)), grid_(grid), cutoff_(cutoff) {
  if (grid.dims() != domain.n() || grid.q() != domain.q()) throw ShapeError("grid does not match the domain");
  precompute();
}

std::vector<int> ExpansionContext::corner_axes() const {
  std::vector<int> a;
  for (int k = 0; k < q(); ++k) a.push_back(k);
  return a;
}

std::vector<int> ExpansionContext::tangential_axes() const {
  std::vector<int> a;
  for (int k = q(); k < grid_.dims(); ++k) a.push_back(k);
  return a;
}

void ExpansionContext::precompute() {
  const auto& dom = transform_.domain();
  const int n = grid_.dims(), qq = q();
  tangential_size_ = 1;
  for (int k = qq; k < n; ++k) tangential_size_ *= grid_.axis(k).nodes;
  a_.assign(qq, std::vector<double>(tangential_size_, 1.0));
  lap_.assign(qq, std::vector<double>(tangential_size_, 0.0));
  grad_.resize(qq);
  flat_.resize(qq);
  std::vector<double> y(n, 0.0);
  std::vector<int> idx(n, 0);
  for (int i = 0; i < qq; ++i) {
    const auto& f = dom.factors[i];
    flat_[i] = f.tangential_dim() == 0 || f.graph.preset == "flat";
    grad_[i].assign(f.tangential_dim(), std::vector<double>(tangential_size_, 0.0));
  }
  for (std::size_t s = 0; s < tangential_size_; ++s) {
    grid_.unflatten(s, idx.data());  // corner indices come out zero
    for (int k = qq; k < n; ++k) y[k] = grid_.axis(k).node(idx[k]);
    for (int i = 0; i < qq; ++i) {
      const auto& f = dom.factors[i];
      if (f.tangential_dim() == 0) continue;
      const int off = dom.tangential_offset(i);
      double t2 = 0;
      for (int m = 0; m < f.tangential_dim(); ++m) t2 += y[off + m] * y[off + m];
      // outside the graph chart the data vanish; coefficients are left flat there
      if (std::sqrt(t2) >= 0.999 * f.graph.domain_radius) continue;
      a_[i][s] = transform_.a(i, y.data());
      lap_[i][s] = transform_.graph_laplacian(i, y.data());
      auto g = transform_.graph_gradient(i, y.data());
      for (int m = 0; m < f.tangential_dim(); ++m) grad_[i][m][s] = g[m];
    }
  }
}

SpectralField ExpansionContext::invert_principal(const SpectralField& F) const {
  for (int k = 0; k < q(); ++k)
    if (!F.spectral[k]) throw ShapeError("principal inverse needs spectral corner axes");
  SpectralField r = F;
  const std::size_t nc = grid_.size() / tangential_size_;
  std::vector<double> chi(nc);
  std::vector<std::vector<double>> eta2(q(), std::vector<double>(nc));
  {
    std::vector<int> idx(grid_.dims(), 0);
    std::vector<double> eta(q());
    for (std::size_t c = 0; c < nc; ++c) {
      grid_.unflatten(c * tangential_size_, idx.data());
      for (int k = 0; k < q(); ++k) {
        eta[k] = grid_.axis(k).freq(idx[k]);
        eta2[k][c] = eta[k] * eta[k];
      }
      chi[c] = cutoff_(eta.data(), q());
    }
  }
  bool bad = false;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const std::size_t c = i / tangential_size_, s = i % tangential_size_;
    if (chi[c] == 0) {
      r.values[i] = 0;
      continue;
    }
    double d = 0;
    for (int k = 0; k < q(); ++k) d += a_[k][s] * eta2[k][c];
    if (d == 0) {
      bad = true;
      continue;
    }
    r.values[i] = -chi[c] * F.values[i] / d;
  }
  if (bad) throw MissingCutoffError("principal symbol vanishes where the cutoff is nonzero");
  return r;
}

GridFunction localize(const DataFunction& f, const ExpansionContext& ctx) {
  const auto& dom = ctx.domain();
  const TensorGrid& g = ctx.grid();
  GridFunction h(g);
  if (f.is_zero()) return h;
  const int n = g.dims();
  parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
    std::vector<int> idx(n);
    std::vector<double> y(n), x(n);
    for (std::size_t i = b; i < e; ++i) {
      g.unflatten(i, idx.data());
      double t2 = 0;
      for (int k = 0; k < n; ++k) {
        y[k] = g.axis(k).node(idx[k]);
        if (k >= g.q()) t2 += y[k] * y[k];
      }
      // |x - x0| >= |t - t0| = |y_t|, so the cutoff vanishes here
      if (t2 >= dom.local_radius * dom.local_radius) continue;
      from_model_unchecked(dom, y.data(), x.data());
      double c = dom.cutoff(x.data());
      if (c == 0) continue;
      h.values[i] = c * f(x.data());
    }
  });
  return h;
}

GridFunction odd_extension(const GridFunction& h, double* jump) {
  GridFunction r = h;
  double j = 0;
  for (int k = 0; k < h.grid.q(); ++k) {
    auto res = reflect(r, k, Parity::Odd);
    j = std::max(j, res.boundary_jump);
    r = std::move(res.f);
  }
  if (jump) *jump = j;
  return r;
}

double corner_trace(const FieldData& v) {
  const double m = v.max_abs();
  if (m == 0) return 0;
  const TensorGrid& g = v.grid;
  std::vector<int> idx(g.dims());
  double t = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.unflatten(i, idx.data());
    for (int k = 0; k < g.q(); ++k)
      if (idx[k] == g.axis(k).zero_index()) t = std::max(t, std::abs(v.values[i]));
  }
  return t / m;
}

SpectralField KParts::total() const {
  SpectralField t = c_part;
  for (const auto& b : b_parts) t += b;
  return t;
}

namespace {

/// Spectral derivative along a physical axis.
SpectralField derivative(const SpectralField& f, int axis) {
  SpectralField F = partial_ft(f, {axis});
  const TensorGrid& g = F.grid;
  const Axis& ax = g.axis(axis);
  const std::size_t st = g.stride(axis);
  for (std::size_t i = 0; i < g.size(); ++i) {
    int m = static_cast<int>((i / st) % ax.nodes);
    // the Nyquist mode has no odd counterpart
    double xi = (2 * m == ax.nodes) ? 0.0 : ax.freq(m);
    F.values[i] *= cplx(0, -xi);
  }
  return partial_ift(F, {axis});
}

SpectralField zeros_like(const SpectralField& v) {
  SpectralField z = v;
  std::fill(z.values.begin(), z.values.end(), cplx(0));
  return z;
}

}  // namespace

KParts apply_K_parts(const ExpansionContext& ctx, const SpectralField& v) {
  const TensorGrid& g = ctx.grid();
  const auto corner = ctx.corner_axes(), tang = ctx.tangential_axes();
  SpectralField vp = partial_ift(v, corner);
  double tr = corner_trace(vp);
  if (tr > ctx.trace_tol)
    throw TraceError("input to K has a nonzero trace on a corner plane (relative " + std::to_string(tr) + ")");

  KParts out;
  if (tang.empty()) {
    out.c_part = zeros_like(v);
  } else {
    SpectralField F = partial_ft(v, tang);
    std::vector<int> idx(g.dims());
    for (std::size_t i = 0; i < g.size(); ++i) {
      g.unflatten(i, idx.data());
      double xi2 = 0;
      for (int k : tang) {
        double xi = g.axis(k).freq(idx[k]);
        xi2 += xi * xi;
      }
      F.values[i] *= xi2;
    }
    out.c_part = partial_ift(F, tang);
  }

  const auto& dom = ctx.domain();
  for (int i = 0; i < ctx.q(); ++i) {
    if (ctx.factor_flat(i)) {
      out.b_parts.push_back(zeros_like(v));
      continue;
    }
    // even re-extension in y_i
    SpectralField w = vp;
    const Axis& ax = g.axis(i);
    const std::size_t st = g.stride(i);
    for (std::size_t p = 0; p < g.size(); ++p) {
      double y = ax.node(static_cast<int>((p / st) % ax.nodes));
      w.values[p] *= (y > 0) - (y < 0);
    }
    // b_i w = -2 sum_m phi_{i,m} d_{t_m} w - Lap(phi_i) w
    SpectralField bw = w;
    for (std::size_t p = 0; p < g.size(); ++p) bw.values[p] *= -ctx.lap_phi(i, ctx.tangential_index(p));
    const int off = dom.tangential_offset(i);
    for (int m = 0; m < dom.factors[i].tangential_dim(); ++m) {
      SpectralField d = derivative(w, off + m);
      for (std::size_t p = 0; p < g.size(); ++p)
        bw.values[p] += -2.0 * ctx.grad_phi(i, m, ctx.tangential_index(p)) * d.values[p];
    }
    SpectralField B = partial_ft(bw, corner);
    for (std::size_t p = 0; p < g.size(); ++p) {
      int m = static_cast<int>((p / st) % ax.nodes);
      double eta = (2 * m == ax.nodes) ? 0.0 : ax.freq(m);
      B.values[p] *= cplx(0, eta);
    }
    out.b_parts.push_back(std::move(B));
  }
  for (auto* f : {&out.c_part}) f->parity = v.parity;
  for (auto& b : out.b_parts) b.parity = v.parity;
  return out;
}

SpectralField apply_K(const ExpansionContext& ctx, const SpectralField& v) { return apply_K_parts(ctx, v).total(); }

ExpansionTerm compute_v0(const ExpansionContext& ctx, const GridFunction& h_odd) {
  if (!(h_odd.grid == ctx.grid())) throw ShapeError("data grid does not match the context");
  ExpansionTerm t;
  t.index = 0;
  t.meta = TermMeta::for_index(0, ctx.q());
  t.data = ctx.invert_principal(partial_ft(h_odd, ctx.corner_axes()));
  t.data.parity.assign(ctx.q(), Parity::Odd);
  return t;
}

ExpansionTerm iterate(const ExpansionContext& ctx, const ExpansionTerm& v) {
  ExpansionTerm t;
  t.index = v.index + 1;
  t.meta = TermMeta::for_index(t.index, ctx.q());
  t.data = ctx.invert_principal(apply_K(ctx, v.data));
  t.data.parity.assign(ctx.q(), Parity::Odd);
  return t;
}

StructuralReport structural_check(const ExpansionContext& ctx, const ExpansionTerm& v, double requested_order) {
  StructuralReport r;
  r.index = v.index;
  r.denominator_power = v.meta.denominator_power;
  for (int k = 0; k < ctx.q(); ++k) {
    double o = v.data.oddness_ratio(k);
    r.oddness.push_back(o);
    if (!(o < defaults::oddness_tol))
      r.violations.push_back("not odd in eta_" + std::to_string(k + 1) + " (ratio " + std::to_string(o) + ")");
  }
  r.trace = corner_trace(partial_ift(v.data, ctx.corner_axes()));
  if (!(r.trace < ctx.trace_tol)) r.violations.push_back("nonzero corner-plane trace " + std::to_string(r.trace));
  const auto tang = ctx.tangential_axes();
  if (!tang.empty()) {
    // divide out the xi-polynomial of degree 2j carried by the symbol
    SpectralField F = partial_ft(v.data, tang);
    const TensorGrid& g = ctx.grid();
    std::vector<int> idx(g.dims());
    for (std::size_t p = 0; p < g.size(); ++p) {
      g.unflatten(p, idx.data());
      double xi2 = 0;
      for (int k : tang) xi2 += std::pow(g.axis(k).freq(idx[k]), 2);
      F.values[p] *= std::pow(1 + xi2, -v.index);
    }
    double nyq = INFINITY;
    for (int k : tang) nyq = std::min(nyq, ctx.grid().axis(k).nyquist());
    TailFit t = tail_exponent(F, nyq / 8, nyq / 2, defaults::tail_samples, defaults::tail_exponent_cap, tang);
    r.tangential_exponent = t.exponent;
    r.tangential_capped = t.capped;
    if (!(t.exponent > requested_order))
      r.violations.push_back("tangential decay exponent " + std::to_string(t.exponent) + " below order " +
                             std::to_string(requested_order));
  }
  if (v.meta.denominator_power != 3 * v.index + 1)
    r.violations.push_back("denominator power " + std::to_string(v.meta.denominator_power) + " is not 3j+1");
  return r;
}

ExpansionSeries build_series(const ExpansionContext& ctx, const GridFunction& h_odd, int depth) {
  if (depth < 0) throw ShapeError("truncation depth must be nonnegative");
  ExpansionSeries s;
  s.h = h_odd;
  s.h_tilde = partial_ft(h_odd, ctx.corner_axes());
  s.terms.push_back(compute_v0(ctx, h_odd));
  for (int j = 0; j < depth; ++j) s.terms.push_back(iterate(ctx, s.terms.back()));
  return s;
}

ExpansionSeries build_series(const ExpansionContext& ctx, const DataFunction& f, int depth) {
  double jump = 0;
  GridFunction h = odd_extension(localize(f, ctx), &jump);
  ExpansionSeries s = build_series(ctx, h, depth);
  s.boundary_jump = jump;
  s.provenance = {"localize: h = phi f; commutator [Delta', phi] u dropped",
                  "reflect: odd extension across every corner plane"};
  return s;
}

std::pair<double, double> tail_window(const ExpansionContext& ctx) {
  double nyq = INFINITY;
  for (int k = 0; k < ctx.q(); ++k) nyq = std::min(nyq, ctx.grid().axis(k).nyquist());
  return {2 * ctx.cutoff().r1, nyq / 2};
}

SpectralField frozen_solve(const ExpansionContext& ctx, const SpectralField& forcing) {
  const auto tang = ctx.tangential_axes();
  SpectralField F = tang.empty() ? forcing : partial_ft(forcing, tang);
  const TensorGrid& g = ctx.grid();
  const int n = g.dims(), qq = ctx.q();
  std::vector<double> y0(n, 0.0);
  std::vector<double> a0(qq);
  for (int i = 0; i < qq; ++i) a0[i] = ctx.transform().a(i, y0.data());
  parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
    std::vector<int> idx(n);
    std::vector<double> eta(qq), xi(n - qq);
    for (std::size_t p = b; p < e; ++p) {
      g.unflatten(p, idx.data());
      for (int k = 0; k < qq; ++k) eta[k] = g.axis(k).freq(idx[k]);
      for (int k = qq; k < n; ++k) xi[k - qq] = g.axis(k).freq(idx[k]);
      cplx P = ctx.transform().P(y0.data(), xi.data(), eta.data());
      F.values[p] = std::abs(P) == 0 ? cplx(0) : F.values[p] / P;
    }
  });
  return F;
}

namespace {

void fill_report(RegularityReport& rep, const ExpansionContext& ctx, const SpectralField& full) {
  auto [lo, hi] = tail_window(ctx);
  TailFit t = tail_exponent(full, lo, hi, defaults::tail_samples, defaults::tail_exponent_cap);
  rep.tail_exponent = t.exponent;
  rep.tail_fit_r2 = t.r2;
  rep.tail_capped = t.capped;
  rep.sobolev_index = sobolev_index(full, hi, -10, defaults::tail_exponent_cap, lo);
  rep.sobolev_index_full = sobolev_index(full, hi, -10, defaults::tail_exponent_cap);
}

}  // namespace

ResidualResult residual(const ExpansionContext& ctx, const ExpansionSeries& series, int N) {
  if (N < 0 || N >= static_cast<int>(series.terms.size())) throw ShapeError("residual depth exceeds computed terms");
  ResidualResult r;
  r.depth = N;
  SpectralField low = series.h_tilde;
  for (int j = 0; j < N; ++j) low += apply_K(ctx, series.terms[j].data);
  const TensorGrid& g = ctx.grid();
  std::vector<int> idx(g.dims());
  std::vector<double> eta(ctx.q());
  for (std::size_t p = 0; p < g.size(); ++p) {
    g.unflatten(p, idx.data());
    for (int k = 0; k < ctx.q(); ++k) eta[k] = g.axis(k).freq(idx[k]);
    low.values[p] *= 1 - ctx.cutoff()(eta.data(), ctx.q());
  }
  r.forcing = apply_K(ctx, series.terms[N].data);
  r.forcing += low;

  const auto tang = ctx.tangential_axes();
  r.forcing_report.id = "forcing N=" + std::to_string(N);
  fill_report(r.forcing_report, ctx, tang.empty() ? r.forcing : partial_ft(r.forcing, tang));

  SpectralField w = frozen_solve(ctx, r.forcing);
  r.remainder_report.id = "remainder N=" + std::to_string(N);
  r.remainder_report.proxy = true;
  r.remainder_report.note = "frozen-coefficient solve at the corner";
  fill_report(r.remainder_report, ctx, w);
  return r;
}

int DegreeLedger::max_degree(int j) const {
  int m = 0;
  for (const auto& s : levels.at(j)) m = std::max(m, s.eta_degree);
  return m;
}

int DegreeLedger::max_power(int j) const {
  int m = 0;
  for (const auto& s : levels.at(j)) m = std::max(m, s.denominator_power);
  return m;
}

int DegreeLedger::max_order(int j) const {
  int m = -1000;
  for (const auto& s : levels.at(j)) m = std::max(m, s.order());
  return m;
}

DegreeLedger degree_ledger(const std::vector<bool>& a_varies, const std::vector<bool>& b_nonzero, int depth) {
  const int q = static_cast<int>(a_varies.size());
  bool any_varies = std::find(a_varies.begin(), a_varies.end(), true) != a_varies.end();
  DegreeLedger L;
  L.levels.push_back({SymbolShape{0, 1, 0, std::vector<Parity>(q, Parity::Odd)}});
  for (int j = 0; j < depth; ++j) {
    std::set<SymbolShape> next;
    for (const auto& s : L.levels.back()) {
      auto emit = [&](SymbolShape t) {
        t.denominator_power += 1;  // principal inverse
        next.insert(t);
      };
      // -Delta_t: both derivatives on the data, one on 1/Sigma^m, or both
      emit({s.eta_degree, s.denominator_power, s.xi_degree + 2, s.data});
      if (any_varies) {
        emit({s.eta_degree + 2, s.denominator_power + 1, s.xi_degree + 1, s.data});
        emit({s.eta_degree + 4, s.denominator_power + 2, s.xi_degree, s.data});
      }
      // i eta_i b_i acting on the even re-extension in y_i
      for (int i = 0; i < q; ++i) {
        if (!b_nonzero[i]) continue;
        auto ext = s.data;
        ext[i] = Parity::Even;
        emit({s.eta_degree + 1, s.denominator_power, s.xi_degree + 1, ext});
        emit({s.eta_degree + 1, s.denominator_power, s.xi_degree, ext});
        if (any_varies) emit({s.eta_degree + 3, s.denominator_power + 1, s.xi_degree, ext});
      }
    }
    L.levels.emplace_back(next.begin(), next.end());
  }
  return L;
}

DegreeLedger degree_ledger(const ExpansionContext& ctx, int depth) {
  std::vector<bool> av(ctx.q()), bn(ctx.q());
  std::size_t ts = 1;
  for (int k : ctx.tangential_axes()) ts *= ctx.grid().axis(k).nodes;
  for (int i = 0; i < ctx.q(); ++i) {
    bn[i] = !ctx.factor_flat(i);
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t s = 0; s < ts; ++s) {
      lo = std::min(lo, ctx.a(i, s));
      hi = std::max(hi, ctx.a(i, s));
    }
    av[i] = hi - lo > 1e-14;
  }
  return degree_ledger(av, bn, depth);
}

}  // namespace cornex
