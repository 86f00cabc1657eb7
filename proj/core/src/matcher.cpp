#include "cornex/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <Eigen/Dense>

#include "cornex/error.hpp"
#include "cornex/oracle.hpp"
#include "cornex/parallel.hpp"

namespace cornex {

namespace {

constexpr cplx I(0, 1);

cplx ipow(int m) {
  static const cplx p[4] = {1.0, I, -1.0, -I};
  return p[((m % 4) + 4) % 4];
}

int total(const std::vector<int>& v) {
  int s = 0;
  for (int x : v) s += x;
  return s;
}

std::vector<int> all_axes(int q) {
  std::vector<int> p(q);
  for (int i = 0; i < q; ++i) p[i] = i;
  return p;
}

std::vector<double> corner_a(const std::vector<double>& a, int q) {
  return a.empty() ? std::vector<double>(q, 1.0) : a;
}

/// Calls fn on every multi-index with alpha_i <= hi_i and alpha_i = lo_i mod 2.
template <class Fn>
void for_each_parity_index(const std::vector<int>& lo, const std::vector<int>& hi, Fn fn) {
  const int d = static_cast<int>(lo.size());
  std::vector<int> a = lo;
  for (int i = 0; i < d; ++i)
    if (a[i] > hi[i]) return;
  while (true) {
    fn(a);
    int i = 0;
    for (; i < d; ++i) {
      a[i] += 2;
      if (a[i] <= hi[i]) break;
      a[i] = lo[i];
    }
    if (i == d) return;
  }
}

int parity_start(Parity p) { return p == Parity::Even ? 1 : 0; }
double parity_weight(Parity p) { return p == Parity::Even ? 2.0 : -2.0; }

std::vector<double> model_point(const ProductDomainSpec& domain, const double* t) {
  std::vector<double> y(domain.n(), 0.0);
  if (t)
    for (int k = domain.q(); k < domain.n(); ++k) y[k] = t[k - domain.q()];
  return y;
}

/// d^alpha h at the corner over the tangential point t.
double trace_at(const ProductDomainSpec& domain, const DataFunction& f, const std::vector<int>& alpha,
                const std::vector<double>& t) {
  auto y = model_point(domain, t.empty() ? nullptr : t.data());
  return localized_jet(domain, f, y.data(), alpha).derivative(alpha);
}

/// (-Delta_t)^j of t -> d^alpha h(0, t) at t.
double laplacian_power_at(const ProductDomainSpec& domain, const DataFunction& f, const std::vector<int>& alpha,
                          int j, std::vector<double> t, double h) {
  if (j == 0) return trace_at(domain, f, alpha, t);
  double s = 0;
  const double c[5] = {-1, 16, -30, 16, -1};
  for (std::size_t m = 0; m < t.size(); ++m) {
    for (int o = -2; o <= 2; ++o) {
      auto tt = t;
      tt[m] += o * h;
      s += c[o + 2] * laplacian_power_at(domain, f, alpha, j - 1, tt, h);
    }
  }
  return -s / (12 * h * h);
}

/// Transform weight of one extended axis at frequency eta on [0, R].
cplx ext_kernel(Parity p, double y, double eta) {
  return p == Parity::Even ? cplx(2 * std::cos(y * eta), 0) : cplx(0, 2 * std::sin(y * eta));
}

/// Max one-sided m-th differences / h^m over the positive corner orthant near
/// the corner, tangential slot at the base point.
std::vector<double> corner_differences(const FieldData& u, int q, const std::vector<int>& orders, double window) {
  const TensorGrid& g = u.grid;
  const int d = g.dims();
  std::vector<int> base(d);
  for (int k = 0; k < d; ++k) base[k] = g.axis(k).zero_index();
  const double h = g.axis(0).spacing();
  const int reach = std::max(1, static_cast<int>(std::lround(window / h)));
  std::vector<double> out;
  for (int m : orders) {
    double best = 0;
    std::size_t count = 1;
    for (int k = 0; k < q; ++k) count *= reach;
    for (std::size_t c = 0; c < count; ++c) {
      std::vector<int> idx = base;
      std::size_t r = c;
      for (int k = 0; k < q; ++k) {
        idx[k] += 1 + static_cast<int>(r % reach);
        r /= reach;
      }
      for (int ax = 0; ax < q; ++ax) {
        if (idx[ax] + m >= g.axis(ax).nodes) continue;
        cplx s = 0;
        double binom = 1;
        for (int j = 0; j <= m; ++j) {
          auto id2 = idx;
          id2[ax] += j;
          double sign = ((m - j) % 2) ? -1.0 : 1.0;
          s += sign * binom * u.values[g.flatten(id2.data())];
          binom = binom * (m - j) / (j + 1);
        }
        best = std::max(best, std::abs(s) / std::pow(h, m));
      }
    }
    out.push_back(best);
  }
  return out;
}

/// Sum over aliases eta + jP, P = 2 pi / h, of the odd jump symbol -2/(i eta)^{m+1}.
cplx discrete_jump_symbol(int m, double eta, double h) {
  if (eta == 0) return 0.0;
  const double P = 2 * std::numbers::pi / h;
  double s;
  if (m == 0) {
    s = (h / 2) / std::tan(eta * h / 2);
  } else {
    s = std::pow(eta, -(m + 1));
    for (int j = 1; j <= 4096; ++j) s += std::pow(eta + j * P, -(m + 1)) + std::pow(eta - j * P, -(m + 1));
  }
  return -2.0 * s / std::pow(I, m + 1);
}


std::vector<int> orders_through(int m) {
  std::vector<int> o;
  for (int k = 1; k <= std::max(m, 1); ++k) o.push_back(k);
  return o;
}

/// Multiplies each grid value by fn(eta, flat index); corner axes spectral.
template <class Fn>
void scale_corner(SpectralField& F, int q, Fn fn) {
  const TensorGrid& g = F.grid;
  std::vector<int> idx(g.dims());
  std::vector<double> eta(q);
  for (std::size_t p = 0; p < g.size(); ++p) {
    g.unflatten(p, idx.data());
    for (int k = 0; k < q; ++k) eta[k] = g.axis(k).freq(idx[k]);
    F.values[p] *= fn(eta.data(), p);
  }
}

}  // namespace

ExpansionContext refined(const ExpansionContext& ctx) {
  std::vector<Axis> axes = ctx.grid().axes();
  for (auto& a : axes) a.nodes *= 2;
  return ExpansionContext(ctx.domain(), TensorGrid(axes, ctx.q()), ctx.cutoff());
}

Jet localized_jet(const ProductDomainSpec& domain, const DataFunction& f, const double* y,
                  const std::vector<int>& orders) {
  const int n = domain.n(), q = domain.q();
  const auto& x0 = domain.base_point;
  std::vector<Jet> x;
  x.reserve(n);
  for (int i = 0; i < q; ++i) {
    double shift = x0[i];
    const auto& g = domain.factors[i].graph;
    if (g.dim) shift += g.value(y + domain.tangential_offset(i));
    x.push_back(Jet::variable(orders, i, y[i] + shift));
  }
  for (int k = q; k < n; ++k) x.emplace_back(orders, x0[k] + y[k]);
  Jet r2(orders, 0.0);
  for (int k = 0; k < n; ++k) {
    Jet d = x[k] - x0[k];
    r2 += d * d;
  }
  const int K = total(orders);
  Jet psi = r2.compose(domain.cutoff_profile().series(r2.value(), K));
  if (psi.value() == 0 && K == 0) return psi;
  return psi * f.jet(x.data());
}

double trace_value(const ProductDomainSpec& domain, const DataFunction& f, const std::vector<int>& alpha,
                   const double* t) {
  std::vector<double> tt;
  if (t) tt.assign(t, t + (domain.n() - domain.q()));
  return trace_at(domain, f, alpha, tt);
}

double trace_laplacian_power(const ProductDomainSpec& domain, const DataFunction& f, const std::vector<int>& alpha,
                             int j, double h) {
  if (j > 0 && domain.n() == domain.q()) return 0.0;
  return laplacian_power_at(domain, f, alpha, j, std::vector<double>(domain.n() - domain.q(), 0.0), h);
}

cplx IbpLedger::trace_symbol(const double* eta) const {
  cplx s = 0;
  for (const auto& t : traces) {
    cplx d = 1;
    for (std::size_t i = 0; i < t.k.size(); ++i)
      for (int m = 0; m < t.k[i]; ++m) d *= I * eta[i];
    s += t.weight * t.value / d;
  }
  return s;
}

IbpLedger ibp_expand(const ProductDomainSpec& domain, const DataFunction& f, int N, std::vector<Parity> extension) {
  if (N < 0) throw ShapeError("integration-by-parts order must be nonnegative");
  const int q = domain.q();
  if (extension.empty()) extension.assign(q, Parity::Odd);
  if (static_cast<int>(extension.size()) != q) throw ShapeError("one extension parity per corner axis");
  IbpLedger L;
  L.N = N;
  L.order = 2 * (N + q);
  L.extension = extension;
  const int M = L.order;
  std::vector<int> lo(q), hi(q, M - 1);
  for (int i = 0; i < q; ++i) lo[i] = parity_start(extension[i]);
  auto y = model_point(domain, nullptr);
  Jet h = localized_jet(domain, f, y.data(), hi);
  for_each_parity_index(lo, hi, [&](const std::vector<int>& alpha) {
    TraceEntry e;
    e.alpha = alpha;
    e.value = h.derivative(alpha);
    for (int i = 0; i < q; ++i) {
      e.weight *= parity_weight(extension[i]);
      e.k.push_back(alpha[i] + 1);
    }
    if (e.value != 0) L.traces.push_back(e);
  });
  for (int axis = 0; axis < q; ++axis) {
    std::vector<int> plo(lo.begin(), lo.begin() + axis), phi(axis, M - 1);
    for_each_parity_index(plo, phi, [&](const std::vector<int>& prefix) {
      L.remainders.push_back(RemainderEntry{axis, prefix, M});
    });
  }
  return L;
}

double ibp_reconstruction_error(const ProductDomainSpec& domain, const DataFunction& f, const IbpLedger& ledger,
                                const std::vector<std::array<double, 2>>& etas) {
  if (domain.q() != 2) throw ShapeError("reconstruction check is implemented for q = 2");
  const double R = domain.local_radius;
  const int M = ledger.order;
  const auto& ext = ledger.extension;
  // radial panels crowd the cutoff transition R/2 < r < R
  std::vector<double> r, wr, th, wth, px, pw;
  auto panels = [&](double a, double b, int count, std::vector<double>& x, std::vector<double>& w) {
    for (int p = 0; p < count; ++p) {
      gauss_legendre(16, a + (b - a) * p / count, a + (b - a) * (p + 1) / count, px, pw);
      x.insert(x.end(), px.begin(), px.end());
      w.insert(w.end(), pw.begin(), pw.end());
    }
  };
    panels(0, R / 2, 4, r, wr);
  panels(R / 2, R, 128, r, wr);
  panels(0, std::numbers::pi / 2, 6, th, wth);
  const std::size_t nr = r.size(), nt = th.size();
  // h and d_0^M h on the quarter disk, d_1^M d_0^m h on the edge y_0 = 0
  std::vector<double> h0(nr * nt), hM(nr * nt);
  auto y = model_point(domain, nullptr);
  parallel_for(nr * nt, [&](std::size_t b, std::size_t e) {
    auto yy = y;
    for (std::size_t p = b; p < e; ++p) {
      yy[0] = r[p / nt] * std::cos(th[p % nt]);
      yy[1] = r[p / nt] * std::sin(th[p % nt]);
      Jet j = localized_jet(domain, f, yy.data(), {M, 0});
      h0[p] = j.value();
      hM[p] = j.derivative({M, 0});
    }
  });
  std::vector<std::vector<double>> edge(nr);
  for (std::size_t p = 0; p < nr; ++p) {
    auto yy = y;
    yy[1] = r[p];
    Jet j = localized_jet(domain, f, yy.data(), {M - 1, M});
    for (int m = 0; m < M; ++m) edge[p].push_back(j.derivative({m, M}));
  }
  double worst = 0;
  for (const auto& eta : etas) {
    cplx direct = 0, rem0 = 0;
    for (std::size_t p = 0; p < nr * nt; ++p) {
      const double rr = r[p / nt], t = th[p % nt];
      cplx k = ext_kernel(ext[0], rr * std::cos(t), eta[0]) * ext_kernel(ext[1], rr * std::sin(t), eta[1]) *
               (rr * wr[p / nt] * wth[p % nt]);
      direct += k * h0[p];
      rem0 += k * hM[p];
    }
    cplx recon = ledger.trace_symbol(eta.data());
    const cplx ie0 = I * eta[0], ie1 = I * eta[1];
    for (const auto& rem : ledger.remainders) {
      if (rem.axis == 0) {
        recon += rem0 / std::pow(ie0, M);
      } else {
        int m = rem.prefix[0];
        cplx s = 0;
        for (std::size_t p = 0; p < nr; ++p) s += ext_kernel(ext[1], r[p], eta[1]) * wr[p] * edge[p][m];
        recon += parity_weight(ext[0]) / std::pow(ie0, m + 1) * s / std::pow(ie1, M);
      }
    }
    worst = std::max(worst, std::abs(recon - direct) / std::max(std::abs(direct), 1e-300));
  }
  return worst;
}

std::vector<std::vector<SymbolTerm>> term_descriptors(const TransformData& transform, int N) {
  if (N < 0) throw ShapeError("truncation depth must be nonnegative");
  const int q = transform.q(), n = transform.n();
  std::vector<double> y0(n, 0.0);
  std::vector<double> b(q);
  for (int i = 0; i < q; ++i) b[i] = transform.first_order_coeff(i, y0.data());
  std::vector<std::vector<SymbolTerm>> levels;
  SymbolTerm t0;
  t0.coef = -1.0;
  t0.ext.assign(q, Parity::Odd);
  t0.beta.assign(q, 0);
  t0.provenance = "v0: h~ / (-Sigma)";
  levels.push_back({t0});
  for (int j = 0; j < N; ++j) {
    std::vector<SymbolTerm> next;
    for (const auto& t : levels.back()) {
      if (n > q) {
        SymbolTerm s = t;
        s.coef = -t.coef;
        s.l += 1;
        s.lap += 1;
        s.index = j + 1;
        s.provenance = "v" + std::to_string(j + 1) + ": |xi|^2 on " + t.provenance;
        next.push_back(s);
      }
      for (int i = 0; i < q; ++i) {
        if (b[i] == 0) continue;
        SymbolTerm s = t;
        s.coef = -t.coef * I * b[i];
        s.beta[i] += 1;
        s.ext[i] = t.ext[i] == Parity::Odd ? Parity::Even : Parity::Odd;
        s.l += 1;
        s.index = j + 1;
        s.provenance = "v" + std::to_string(j + 1) + ": i eta_" + std::to_string(i + 1) + " b_" +
                       std::to_string(i + 1) + " on " + t.provenance;
        next.push_back(s);
      }
    }
    levels.push_back(std::move(next));
  }
  return levels;
}

cplx matched_normalization(int dims, int l, const std::vector<int>& k, const std::vector<double>& a) {
  cplx c0 = normalization_constant(dims, l, {}, a);
  c0 = dims % 2 == 0 ? cplx(0, c0.imag()) : cplx(c0.real(), 0);
  return ipow(total(k)) * c0;
}

std::vector<MatchedTerm> match_terms(const SymbolTerm& term, const TraceFn& traces, int q, const MatchOptions& opt,
                                     std::vector<std::string>* errors) {
  const auto a = corner_a(opt.a, q);
  const auto p = all_axes(q);
  std::vector<int> lo(q), hi(q, opt.max_trace_order);
  for (int i = 0; i < q; ++i) lo[i] = parity_start(term.ext[i]);
  std::vector<MatchedTerm> out;
  for_each_parity_index(lo, hi, [&](const std::vector<int>& alpha) {
    std::vector<int> k(q), kp(q), bp(q);
    double w = 1;
    for (int i = 0; i < q; ++i) {
      k[i] = alpha[i] + 1;
      w *= parity_weight(term.ext[i]);
      int m = std::min(k[i], term.beta[i]);
      kp[i] = k[i] - m;
      bp[i] = term.beta[i] - m;
    }
    if (2 * term.l - q + total(kp) - total(bp) > opt.max_strength) return;
    double T = traces(alpha, term.lap);
    if (T == 0) return;
    cplx S = term.coef * w * T * ipow(-total(k));
    SingularFunction basis = phi_antiderivative(phi_base(p, term.l, a), kp);
    cplx C = S / matched_normalization(q, term.l, kp, a);
    try {
      for (int i = 0; i < q; ++i)
        for (int m = 0; m < bp[i]; ++m) {
          auto rel = phi_derivative(basis, i);
          C *= I * rel.factor;
          basis = rel.target;
        }
    } catch (const UnreducibleTermError& e) {
      if (errors) errors->push_back(term.provenance + ", trace d^" + [&] {
        std::string s = "(";
        for (int i = 0; i < q; ++i) s += (i ? "," : "") + std::to_string(alpha[i]);
        return s + ")";
      }() + ": " + e.what());
      return;
    }
    MatchedTerm mt;
    mt.c = C;
    mt.basis = basis;
    std::string al;
    for (int i = 0; i < q; ++i) al += (i ? "," : "") + std::to_string(alpha[i]);
    mt.provenance.push_back(term.provenance + "; trace d^(" + al + ")" +
                            (term.lap ? " (-Delta_t)^" + std::to_string(term.lap) : ""));
    out.push_back(std::move(mt));
  });
  return out;
}

std::vector<MatchedTerm> combine_terms(std::vector<MatchedTerm> terms) {
  std::map<std::string, MatchedTerm> by_id;
  for (auto& t : terms) {
    auto it = by_id.find(t.id());
    if (it == by_id.end()) {
      by_id.emplace(t.id(), std::move(t));
      continue;
    }
    it->second.c += t.c;
    if (it->second.profile.size() == t.profile.size())
      for (std::size_t s = 0; s < t.profile.size(); ++s) it->second.profile[s] += t.profile[s];
    for (auto& p : t.provenance) it->second.provenance.push_back(std::move(p));
  }
  std::vector<MatchedTerm> out;
  for (auto& [id, t] : by_id)
    if (std::abs(t.c) > 0) out.push_back(std::move(t));
  std::stable_sort(out.begin(), out.end(), [](const MatchedTerm& x, const MatchedTerm& y) {
    if (x.strength() != y.strength()) return x.strength() < y.strength();
    return x.id() < y.id();
  });
  return out;
}

SpectralField product_cutoff_part(const ExpansionContext& ctx, const SpectralField& v, int j) {
  const int q = ctx.q();
  CutoffSpec axis_cut = ctx.cutoff();
  axis_cut.kind = CutoffSpec::Kind::PerAxisFrequency;
  SpectralField r = v;
  scale_corner(r, q, [&](const double* eta, std::size_t) -> cplx {
    double prod = axis_cut(eta, q);
    if (prod == 0) return 0.0;
    double chi = ctx.cutoff()(eta, q);
    return prod / std::pow(chi, j + 1);
  });
  return r;
}

CutoffFactorization factor_cutoff(const ExpansionContext& coarse, const ExpansionContext& fine, const DataFunction& f,
                                  int j, int order) {
  CutoffFactorization out;
  out.index = j;
  const auto corner = coarse.corner_axes();
  const double window = 4 * coarse.grid().axis(0).spacing();
  const auto orders = orders_through(order);
  auto discarded = [&](const ExpansionContext& ctx, std::vector<double>& diffs, std::vector<double>* ref,
                       double* ratio, std::vector<OrderGrowth>* growth) {
    auto series = build_series(ctx, f, j);
    const SpectralField& v = series.terms[j].data;
    SpectralField D = v;
    SpectralField kept = product_cutoff_part(ctx, v, j);
    for (std::size_t p = 0; p < D.values.size(); ++p) D.values[p] -= kept.values[p];
    if (ratio) {
      double vm = v.max_abs();
      *ratio = vm > 0 ? D.max_abs() / vm : 0.0;
    }
    GridFunction d = to_grid_function(partial_ift(D, corner));
    diffs = corner_differences(d, ctx.q(), orders, window);
    if (ref) *ref = corner_differences(partial_ift(v, corner), ctx.q(), orders, window);
    if (growth)
      for (int ax : corner)
        for (int m : orders) growth->push_back(plane_growth(d, ax, m, ctx.domain().local_radius / 2));
  };
  out.measure.orders = orders;
  discarded(coarse, out.measure.coarse, nullptr, nullptr, nullptr);
  discarded(fine, out.measure.fine, &out.measure.reference, &out.discarded_ratio, &out.growth);
  certify(out.measure);
  out.certified = out.measure.certified_through(orders.back());
  return out;
}

double split_identity_defect(const std::vector<double>& a, const std::vector<double>& eta, int m, int S) {
  double A = a[m] * eta[m] * eta[m], Sp = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (static_cast<int>(i) != m) Sp += a[i] * eta[i] * eta[i];
  const double Sigma = A + Sp;
  double series = 0;
  for (int s = 0; s < S; ++s) series += std::pow(-A, s) / std::pow(Sp, s + 1);
  series += std::pow(-A, S) / (std::pow(Sp, S) * Sigma);
  return std::abs(1 / Sigma - series) * Sigma;
}

GeometricSplit geometric_split(const ExpansionContext& coarse, const ExpansionContext& fine, const DataFunction& f,
                               const RemainderEntry& entry, int N) {
  const int q = coarse.q();
  GeometricSplit out;
  out.m_axis = entry.axis;
  out.N = (N + q) % 2 ? N + 1 : N;
  const int S = (out.N + q) / 2;
  out.terms = S + 1;
  const int M = entry.order;
  const int m = entry.axis;
  const auto orders = orders_through(out.N);
  const double window = 4 * coarse.grid().axis(0).spacing();

  auto build = [&](const ExpansionContext& ctx, std::vector<double>& diffs, std::vector<double>* ref,
                   std::vector<OrderGrowth>* growth) {
    const auto& dom = ctx.domain();
    const TensorGrid& g = ctx.grid();
    const int n = g.dims();
    // d^prefix h (and its d_m^j traces) over the positive corner orthant, earlier axes at zero
    auto sample = [&](const std::vector<int>& jo, int fixed_through) {
      GridFunction r(g);
      parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
        std::vector<int> idx(n);
        std::vector<double> y(n);
        for (std::size_t p = b; p < e; ++p) {
          g.unflatten(p, idx.data());
          bool skip = false;
          double r2 = 0;
          for (int k = 0; k < n; ++k) {
            y[k] = g.axis(k).node(idx[k]);
            if (k < q && (y[k] < 0 || (k <= fixed_through && idx[k] != g.axis(k).zero_index()))) skip = true;
            if (k > fixed_through) r2 += y[k] * y[k];
          }
          if (skip || r2 >= dom.local_radius * dom.local_radius) continue;
          r.values[p] = localized_jet(dom, f, y.data(), jo).derivative(jo);
        }
      });
      for (int k = fixed_through + 1; k < q; ++k) r = reflect(r, k, Parity::Odd).f;
      std::vector<int> axes;
      for (int k = fixed_through + 1; k < q; ++k) axes.push_back(k);
      return partial_ft(r, axes);
    };
    std::vector<int> jo(q, 0);
    for (std::size_t b = 0; b < entry.prefix.size(); ++b) jo[b] = entry.prefix[b];
    SpectralField F = sample(jo, m - 1);
    // FT(d_m^M g)/(i eta_m)^M = FT(g^o) - traces, with alias-summed jump symbols
    std::vector<SpectralField> traces;
    for (int j = 0; j < M; j += 2) {
      auto jt = jo;
      jt[m] = j;
      traces.push_back(sample(jt, m));
    }
    {
      SpectralField G(g, std::vector<bool>(n, false));
      for (int k = 0; k < q; ++k) G.spectral[k] = true;
      const double hm = g.axis(m).spacing();
      std::vector<std::vector<cplx>> jump(traces.size(), std::vector<cplx>(g.axis(m).nodes));
      for (std::size_t j = 0; j < traces.size(); ++j)
        for (int k = 0; k < g.axis(m).nodes; ++k)
          jump[j][k] = discrete_jump_symbol(static_cast<int>(2 * j), g.axis(m).freq(k), hm);
      std::vector<int> idx(n);
      for (std::size_t p = 0; p < g.size(); ++p) {
        g.unflatten(p, idx.data());
        auto src = idx;
        for (int k = 0; k < m; ++k) src[k] = g.axis(k).zero_index();
        cplx v = F.values[g.flatten(src.data())];
        src[m] = g.axis(m).zero_index();
        for (std::size_t j = 0; j < traces.size(); ++j) v -= traces[j].values[g.flatten(src.data())] * jump[j][idx[m]];
        G.values[p] = v;
      }
      F = G;
    }
    CutoffSpec axis_cut = ctx.cutoff();
    axis_cut.kind = CutoffSpec::Kind::PerAxisFrequency;
    scale_corner(F, q, [&](const double* eta, std::size_t p) -> cplx {
      double chi = axis_cut.radial(std::abs(eta[m]));
      for (int i = 0; i < q; ++i)
        if (i != m) chi *= axis_cut.radial(std::abs(eta[i]));
      if (chi == 0) return 0.0;
      const std::size_t s = ctx.tangential_index(p);
      double A = ctx.a(m, s) * eta[m] * eta[m], Sp = 0;
      for (int i = 0; i < q; ++i)
        if (i != m) Sp += ctx.a(i, s) * eta[i] * eta[i];
      cplx prefix = 1;
      for (int k = 0; k < m; ++k)
        prefix *= -2.0 / std::pow(I * eta[k], entry.prefix[k] + 1);
      return chi * prefix * std::pow(-A, S) / (std::pow(Sp, S) * (A + Sp));
    });
    GridFunction u = to_grid_function(partial_ift(F, ctx.corner_axes()));
    diffs = corner_differences(u, q, orders, window);
    if (ref) {
      auto series = build_series(ctx, f, 0);
      *ref = corner_differences(partial_ift(series.terms[0].data, ctx.corner_axes()), q, orders, window);
    }
    if (growth)
      for (int ax = 0; ax < q; ++ax)
        for (int o : orders) growth->push_back(plane_growth(u, ax, o, ctx.domain().local_radius / 2));
  };
  out.measure.orders = orders;
  build(coarse, out.measure.coarse, nullptr, nullptr);
  build(fine, out.measure.fine, &out.measure.reference, &out.growth);
  certify(out.measure);
  out.certified = out.measure.certified_through(orders.back());
  return out;
}

SpectralField corner_slice_v0(const ProductDomainSpec& domain, const DataFunction& f, int nodes, double half_length) {
  const int q = domain.q();
  TensorGrid g = TensorGrid::uniform(q, q, nodes, half_length);
  std::vector<double> y0(domain.n(), 0.0);
  TransformData tr(domain);
  std::vector<double> a(q);
  for (int i = 0; i < q; ++i) a[i] = tr.a(i, y0.data());
  GridFunction h(g);
  if (!f.is_zero()) {
    const double R2 = domain.local_radius * domain.local_radius;
    parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
      std::vector<int> idx(q);
      std::vector<double> y(domain.n(), 0.0), x(domain.n());
      for (std::size_t p = b; p < e; ++p) {
        g.unflatten(p, idx.data());
        double r2 = 0;
        for (int k = 0; k < q; ++k) {
          y[k] = g.axis(k).node(idx[k]);
          r2 += y[k] * y[k];
        }
        if (r2 >= R2) continue;
        from_model_unchecked(domain, y.data(), x.data());
        double c = domain.cutoff(x.data());
        if (c != 0) h.values[p] = c * f(x.data());
      }
    });
  }
  h = odd_extension(h);
  SpectralField F = partial_ft(h, all_axes(q));
  CutoffSpec chi = default_frequency_cutoff(g);
  scale_corner(F, q, [&](const double* eta, std::size_t) -> cplx {
    double c = chi(eta, q);
    if (c == 0) return 0.0;
    double s = 0;
    for (int i = 0; i < q; ++i) s += a[i] * eta[i] * eta[i];
    return -c / s;
  });
  F.parity.assign(q, Parity::Odd);
  return F;
}

cplx fit_symbol_coefficient(const SpectralField& v, const std::vector<double>& a, const std::vector<int>& k, int l,
                            const std::vector<std::vector<int>>& others, double r_lo, double r_hi) {
  const int q = static_cast<int>(k.size());
  const TensorGrid& g = v.grid;
  std::vector<std::vector<int>> ks{k};
  ks.insert(ks.end(), others.begin(), others.end());
  std::vector<std::size_t> rows;
  std::vector<int> idx(g.dims());
  std::vector<double> eta(q);
  for (std::size_t p = 0; p < g.size(); ++p) {
    g.unflatten(p, idx.data());
    bool at_slot = true;
    for (int k2 = q; k2 < g.dims(); ++k2) at_slot &= idx[k2] == g.axis(k2).zero_index();
    if (!at_slot) continue;
    double r2 = 0;
    bool ok = true;
    for (int i = 0; i < q; ++i) {
      eta[i] = g.axis(i).freq(idx[i]);
      r2 += eta[i] * eta[i];
      if (std::abs(eta[i]) < r_lo / 2) ok = false;
    }
    double r = std::sqrt(r2);
    if (ok && r >= r_lo && r <= r_hi) rows.push_back(p);
  }
  // columns eta^e / Sigma^l, deduplicated by exponent, target first
  std::vector<std::vector<int>> expo;
  for (const auto& kk : ks) {
    std::vector<int> e(q);
    for (int i = 0; i < q; ++i) e[i] = -kk[i];
    if (std::find(expo.begin(), expo.end(), e) == expo.end()) expo.push_back(e);
    for (int i = 0; i < q; ++i) {
      auto f = e;
      f[i] += 2;
      if (std::find(expo.begin(), expo.end(), f) == expo.end()) expo.push_back(f);
    }
  }
  const int ncol = static_cast<int>(expo.size());
  if (static_cast<int>(rows.size()) < 4 * ncol) throw FitError("symbol fit annulus holds too few frequencies");
  Eigen::MatrixXcd A(rows.size(), ncol);
  Eigen::VectorXcd b(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    g.unflatten(rows[r], idx.data());
    double s = 0, jump = 1;
    for (int i = 0; i < q; ++i) {
      eta[i] = g.axis(i).freq(idx[i]);
      s += a[i] * eta[i] * eta[i];
      double x = std::numbers::pi * eta[i] / (2 * g.axis(i).nyquist());
      jump *= x / std::tan(x);
    }
    for (int c = 0; c < ncol; ++c) {
      double m = 1;
      for (int i = 0; i < q; ++i) m *= std::pow(eta[i], expo[c][i]);
      A(r, c) = m / std::pow(s, l);
    }
    b(r) = v.values[rows[r]] / jump;
  }
  Eigen::VectorXd scale(ncol);
  for (int c = 0; c < ncol; ++c) {
    scale(c) = A.col(c).cwiseAbs().maxCoeff();
    A.col(c) /= scale(c);
  }
  Eigen::VectorXcd x = A.colPivHouseholderQr().solve(b);
  return x(0) / scale(0);
}

cplx ExpansionResult::evaluate(const ProductDomainSpec& domain, const std::vector<double>& x) const {
  auto y = to_model_coordinates(domain, x);
  cplx s = 0;
  for (const auto& t : terms) s += t.c * t.basis.at(y.data());
  return s;
}

ExpansionResult assemble_expansion(const DataFunction& f, const ProductDomainSpec& domain, int N,
                                   const AssembleOptions& opt) {
  if (N < 0) throw ShapeError("truncation depth must be nonnegative");
  ExpansionResult res;
  res.N = N;
  res.base_point = domain.base_point;
  const int q = domain.q();
  ExpansionContext ctx(domain, opt.grid);
  if (opt.cutoff_r0 > 0) {
    CutoffSpec c = ctx.cutoff();
    c.r0 = opt.cutoff_r0;
    c.r1 = opt.cutoff_r1 > opt.cutoff_r0 ? opt.cutoff_r1 : 2 * opt.cutoff_r0;
    ctx.set_cutoff(c);
  }
  std::vector<double> y0(domain.n(), 0.0);
  MatchOptions mo;
  mo.max_strength = opt.max_strength >= 0 ? opt.max_strength : N + q;
  mo.max_trace_order = mo.max_strength + 2;
  for (int i = 0; i < q; ++i) mo.a.push_back(ctx.transform().a(i, y0.data()));

  if (!f.is_zero()) {
    std::map<std::pair<std::vector<int>, int>, double> cache;
    TraceFn traces = [&](const std::vector<int>& alpha, int lap) {
      auto key = std::make_pair(alpha, lap);
      auto it = cache.find(key);
      if (it != cache.end()) return it->second;
      double v = trace_laplacian_power(domain, f, alpha, lap);
      cache[key] = v;
      return v;
    };
    std::vector<MatchedTerm> all;
    try {
      for (const auto& level : term_descriptors(ctx.transform(), N))
        for (const auto& t : level) {
          auto m = match_terms(t, traces, q, mo, &res.errors);
          all.insert(all.end(), m.begin(), m.end());
        }
    } catch (const Error& e) {
      res.errors.push_back(std::string("match: ") + e.what());
    }
    if (opt.profiles) {
      for (auto& t : all) t.profile.clear();
      std::vector<std::vector<MatchedTerm>> shifted;
      for (double s : opt.profile_offsets) {
        std::vector<double> t(domain.n() - q, s);
        TraceFn tr = [&](const std::vector<int>& alpha, int lap) {
          if (lap > 0 && domain.n() == q) return 0.0;
          return laplacian_power_at(domain, f, alpha, lap, t, 0.02);
        };
        std::vector<MatchedTerm> ms;
        for (const auto& level : term_descriptors(ctx.transform(), N))
          for (const auto& d : level) {
            auto m = match_terms(d, tr, q, mo, nullptr);
            ms.insert(ms.end(), m.begin(), m.end());
          }
        shifted.push_back(combine_terms(std::move(ms)));
      }
      res.terms = combine_terms(std::move(all));
      for (auto& t : res.terms)
        for (const auto& sh : shifted) {
          double v = 0;
          for (const auto& u : sh)
            if (u.id() == t.id()) v = std::abs(u.c);
          t.profile.push_back(v);
        }
    } else {
      res.terms = combine_terms(std::move(all));
    }
  }

  // numeric leading coefficient and reality of the assembled part
  try {
    auto series = build_series(ctx, f, N);
    std::vector<int> k1(q, 1);
    std::vector<std::vector<int>> others;
    for (int i = 0; i < q; ++i) {
      auto kk = k1;
      kk[i] += 2;
      others.push_back(kk);
    }
    if (!f.is_zero()) {
      const int nodes = opt.numeric_nodes > 0 ? opt.numeric_nodes : (q == 2 ? 512 : 96);
      SpectralField v0 = corner_slice_v0(domain, f, nodes, ctx.grid().axis(0).half_length);
      double nyq = v0.grid.axis(0).nyquist();
      cplx S = fit_symbol_coefficient(v0, mo.a, k1, 1, others, 0.6 * nyq, 0.9 * nyq);
      res.numeric_leading = S / matched_normalization(q, 1, k1, mo.a);
    }
    res.remainder = residual(ctx, series, N).remainder_report;
  } catch (const Error& e) {
    res.errors.push_back(std::string("numeric stage: ") + e.what());
  }
  {
    double re = 0, im = 0;
    const int side = 8;
    std::vector<double> y(q);
    std::size_t count = 1;
    for (int i = 0; i < q; ++i) count *= side;
    for (std::size_t c = 0; c < count; ++c) {
      std::size_t r = c;
      for (int i = 0; i < q; ++i) {
        y[i] = 0.1 * (1 + static_cast<double>(r % side)) / side;
        r /= side;
      }
      cplx s = 0;
      for (const auto& t : res.terms) s += t.c * t.basis.at(y.data());
      re = std::max(re, std::abs(s.real()));
      im = std::max(im, std::abs(s.imag()));
    }
    res.imaginary_ratio = re > 0 ? im / re : 0.0;
  }

  if (opt.certify && !f.is_zero()) {
    try {
      ExpansionContext fine = refined(ctx);
      for (int j = 0; j <= N; ++j) res.cutoff_checks.push_back(factor_cutoff(ctx, fine, f, j));
      IbpLedger ledger = ibp_expand(domain, f, N);
      for (int ax = 0; ax < q; ++ax) {
        RemainderEntry e{ax, std::vector<int>(ax, 0), ledger.order};
        res.split_checks.push_back(geometric_split(ctx, fine, f, e, N));
      }
    } catch (const Error& e) {
      res.errors.push_back(std::string("certification: ") + e.what());
    }
    for (const auto& c : res.cutoff_checks)
      if (!c.certified) res.errors.push_back("cutoff factorization of v" + std::to_string(c.index) + " not certified");
    for (const auto& s : res.split_checks)
      if (!s.certified)
        res.errors.push_back("geometric split on axis " + std::to_string(s.m_axis + 1) + " not certified C^" +
                             std::to_string(s.N));
  }
  return res;
}

}  // namespace cornex
