#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cornex/error.hpp"
#include "cornex/expansion.hpp"

using namespace cornex;

namespace {

constexpr double pi = std::numbers::pi;

ProductDomainSpec flat_domain() { return make_domain({"flat", "flat"}, {2, 1}, 0.5); }
ProductDomainSpec paraboloid_domain() { return make_domain({"paraboloid:1", "flat"}, {2, 1}, 0.5); }

double max_diff(const FieldData& a, const FieldData& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

/// Odd in both corner variables, vanishing on the corner planes, Gaussian in t.
cplx odd_gaussian(const double* y) {
  return y[0] * y[1] * std::exp(-(y[0] * y[0] + y[1] * y[1])) * std::exp(-100 * y[2] * y[2]);
}

}  // namespace

TEST(Localize, ZeroDataGivesZero) {
  ExpansionContext ctx(flat_domain(), ExpansionGridSpec{32, 16, 0, 0});
  EXPECT_EQ(localize(make_data("zero", ctx.domain()), ctx).max_abs(), 0.0);
}

TEST(Localize, OneGivesTheCutoff) {
  auto dom = paraboloid_domain();
  ExpansionContext ctx(dom, ExpansionGridSpec{32, 16, 0, 0});
  GridFunction h = localize(make_data("one", dom), ctx);
  auto ref = GridFunction::sample(ctx.grid(), [&](const double* y) {
    std::vector<double> x(3);
    from_model_unchecked(dom, y, x.data());
    return cplx(dom.cutoff(x.data()));
  });
  EXPECT_LT(max_diff(h, ref), 1e-15);
  EXPECT_NEAR(h.max_abs(), 1.0, 1e-15);
}

TEST(Localize, SupportInsideCutoffSupport) {
  auto dom = paraboloid_domain();
  ExpansionContext ctx(dom, ExpansionGridSpec{32, 16, 0, 0});
  for (auto preset : {"manufactured", "corner_bump:0.2", "vanishing:2"}) {
    GridFunction h = localize(make_data(preset, dom), ctx);
    std::vector<int> idx(3);
    std::vector<double> y(3), x(3);
    for (std::size_t i = 0; i < h.grid.size(); ++i) {
      h.grid.unflatten(i, idx.data());
      for (int k = 0; k < 3; ++k) y[k] = h.grid.axis(k).node(idx[k]);
      from_model_unchecked(dom, y.data(), x.data());
      if (dom.cutoff(x.data()) == 0) EXPECT_EQ(h.values[i], cplx(0)) << preset;
    }
  }
}

TEST(ApplyK, FlatGeometryIsMinusTangentialLaplacian) {
  ExpansionContext ctx(flat_domain(), ExpansionGridSpec{32, 64, 0, 0});
  auto u = GridFunction::sample(ctx.grid(), odd_gaussian);
  SpectralField K = apply_K(ctx, partial_ft(u, ctx.corner_axes()));
  auto phys = partial_ift(K, ctx.corner_axes());
  auto ref = GridFunction::sample(ctx.grid(), [](const double* y) {
    double t = y[2];
    return -odd_gaussian(y) * (40000 * t * t - 200);
  });
  EXPECT_LT(max_diff(phys, ref) / ref.max_abs(), 1e-10);
}

TEST(ApplyK, ConstantFirstOrderPartMatchesDirectAssembly) {
  const double alpha = 0.3;
  auto dom = make_domain({"linear:0.3", "flat"}, {2, 1}, 0.5);
  dom.require_normalized = false;
  ExpansionContext ctx(dom, ExpansionGridSpec{32, 64, 0, 0});
  auto u = GridFunction::sample(ctx.grid(), odd_gaussian);
  KParts parts = apply_K_parts(ctx, partial_ft(u, ctx.corner_axes()));
  // b_1 = -2 alpha d/dt on sign(y1) u, then i eta_1
  auto w = GridFunction::sample(ctx.grid(), [&](const double* y) {
    double s = (y[0] > 0) - (y[0] < 0);
    return s * -2 * alpha * odd_gaussian(y) * (-200 * y[2]);
  });
  SpectralField ref = partial_ft(w, ctx.corner_axes());
  ref = apply_symbol(ref, [&](const double* c) {
    return std::abs(c[0]) == ctx.grid().axis(0).nyquist() ? cplx(0) : cplx(0, c[0]);
  });
  EXPECT_LT(max_diff(parts.b_parts[0], ref) / ref.max_abs(), 1e-10);
  EXPECT_EQ(parts.b_parts[1].max_abs(), 0.0);
}

TEST(ApplyK, ZeroInputGivesZero) {
  ExpansionContext ctx(paraboloid_domain(), ExpansionGridSpec{32, 16, 0, 0});
  SpectralField z(ctx.grid(), {true, true, false});
  EXPECT_EQ(apply_K(ctx, z).max_abs(), 0.0);
}

TEST(ApplyK, RefusesNonzeroTrace) {
  ExpansionContext ctx(flat_domain(), ExpansionGridSpec{32, 16, 0, 0});
  auto u = GridFunction::sample(ctx.grid(), [](const double* y) {
    return cplx(std::exp(-(y[0] * y[0] + y[1] * y[1] + 10 * y[2] * y[2])));
  });
  EXPECT_THROW(apply_K(ctx, partial_ft(u, ctx.corner_axes())), TraceError);
}

TEST(ComputeV0, MatchesSineSeriesSolution) {
  // interval factors: n = q = 2, model Dirichlet problem on a square
  auto dom = make_domain({"flat", "flat"}, {1, 1}, 0.5);
  ExpansionContext ctx(dom, ExpansionGridSpec{64, 16, 0, 0});
  const double L = ctx.grid().axis(0).half_length;
  const int m1 = 6, m2 = 4;
  auto h = GridFunction::sample(ctx.grid(), [&](const double* y) {
    return cplx(std::sin(m1 * pi * y[0] / L) * std::sin(m2 * pi * y[1] / L));
  });
  ExpansionTerm v0 = compute_v0(ctx, h);
  auto phys = partial_ift(v0.data, ctx.corner_axes());
  const double lam = std::pow(m1 * pi / L, 2) + std::pow(m2 * pi / L, 2);
  double err = 0;
  for (std::size_t i = 0; i < h.values.size(); ++i) err = std::max(err, std::abs(phys.values[i] + h.values[i] / lam));
  EXPECT_LT(err, 1e-12);
}

TEST(ComputeV0, ZeroAndParity) {
  auto dom = paraboloid_domain();
  ExpansionContext ctx(dom, ExpansionGridSpec{32, 16, 0, 0});
  GridFunction zero(ctx.grid());
  EXPECT_EQ(compute_v0(ctx, zero).data.max_abs(), 0.0);
  auto s = build_series(ctx, make_data("manufactured", dom), 0);
  for (int k = 0; k < 2; ++k) EXPECT_LT(s.terms[0].data.oddness_ratio(k), 1e-12);
}

TEST(ComputeV0, MissingCutoffIsReported) {
  auto dom = flat_domain();
  ExpansionContext ctx(dom, ExpansionGridSpec{32, 16, 0, 0});
  CutoffSpec none;
  none.r0 = -2;
  none.r1 = -1;  // identically one: nothing masks eta = 0
  ctx.set_cutoff(none);
  auto h = odd_extension(localize(make_data("one", dom), ctx));
  EXPECT_THROW(compute_v0(ctx, h), MissingCutoffError);
}

TEST(Iterate, FlatFirstTermMatchesSymbolProduct) {
  auto dom = flat_domain();
  ExpansionContext ctx(dom, ExpansionGridSpec{32, 32, 0, 0});
  auto s = build_series(ctx, make_data("corner_bump:0.3", dom), 1);
  // chi^2 |xi|^2 h~ / |eta|^4 in the fully transformed representation
  SpectralField H = partial_ft(s.h_tilde, {2});
  const CutoffSpec& chi = ctx.cutoff();
  SpectralField ref = apply_symbol(H, [&](const double* c) {
    double e2 = c[0] * c[0] + c[1] * c[1];
    double x = chi(c, 2);
    return x == 0 ? cplx(0) : cplx(x * x * c[2] * c[2] / (e2 * e2));
  });
  SpectralField v1 = partial_ft(s.terms[1].data, {2});
  EXPECT_LT(max_diff(v1, ref) / ref.max_abs(), 1e-10);
}

TEST(Iterate, ZeroStaysZero) {
  ExpansionContext ctx(paraboloid_domain(), ExpansionGridSpec{32, 16, 0, 0});
  ExpansionTerm z;
  z.data = SpectralField(ctx.grid(), {true, true, false});
  z.meta = TermMeta::for_index(0, 2);
  EXPECT_EQ(iterate(ctx, z).data.max_abs(), 0.0);
}

TEST(Iterate, LinearInData) {
  auto dom = paraboloid_domain();
  ExpansionContext ctx(dom, ExpansionGridSpec{32, 16, 0, 0});
  std::mt19937 rng(11);
  std::normal_distribution<double> N;
  for (int trial = 0; trial < 3; ++trial) {
    double a = N(rng), b = N(rng);
    auto f = odd_extension(localize(make_data("manufactured", dom), ctx));
    auto g = odd_extension(localize(make_data("corner_bump:0.25", dom), ctx));
    GridFunction fg = f;
    for (std::size_t i = 0; i < fg.values.size(); ++i) fg.values[i] = a * f.values[i] + b * g.values[i];
    auto sf = build_series(ctx, f, 2), sg = build_series(ctx, g, 2), sfg = build_series(ctx, fg, 2);
    for (int j = 0; j <= 2; ++j) {
      SpectralField comb = sf.terms[j].data;
      comb *= a;
      SpectralField tmp = sg.terms[j].data;
      tmp *= b;
      comb += tmp;
      EXPECT_LT(max_diff(comb, sfg.terms[j].data) / comb.max_abs(), 1e-12) << "j=" << j;
    }
  }
}

TEST(Structural, ChecksPassOnComputedTerms) {
  for (auto dom : {flat_domain(), paraboloid_domain()}) {
    ExpansionContext ctx(dom, ExpansionGridSpec{64, 32, 0, 0});
    auto s = build_series(ctx, make_data("one", dom), 3);
    for (const auto& t : s.terms) {
      auto r = structural_check(ctx, t);
      EXPECT_TRUE(r.ok()) << "j=" << t.index << " " << (r.violations.empty() ? "" : r.violations[0]);
      EXPECT_LT(r.trace, 1e-8);
      EXPECT_EQ(r.denominator_power, 3 * t.index + 1);
    }
  }
}

TEST(Structural, EvenPerturbationIsFlagged) {
  auto dom = flat_domain();
  ExpansionContext ctx(dom, ExpansionGridSpec{32, 16, 0, 0});
  auto s = build_series(ctx, make_data("one", dom), 0);
  ExpansionTerm bad = s.terms[0];
  const double m = bad.data.max_abs();
  std::vector<int> idx(3);
  for (std::size_t i = 0; i < bad.data.values.size(); ++i) {
    bad.data.grid.unflatten(i, idx.data());
    double e = bad.data.grid.axis(0).freq(idx[0]);
    bad.data.values[i] += 1e-3 * m * std::exp(-e * e);
  }
  auto r = structural_check(ctx, bad);
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.violations[0].find("not odd"), std::string::npos);
}

TEST(Structural, KinkedTangentialProfileIsFlagged) {
  auto dom = flat_domain();
  ExpansionContext ctx(dom, ExpansionGridSpec{32, 32, 0, 0});
  auto h = GridFunction::sample(ctx.grid(), [](const double* y) {
    return cplx(std::sin(y[0]) * std::sin(y[1]) * std::max(0.0, 0.4 - std::abs(y[2])));
  });
  auto v0 = compute_v0(ctx, h);
  EXPECT_FALSE(structural_check(ctx, v0).ok());
}

TEST(Structural, ParaboloidSecondTermHasZeroTrace) {
  auto dom = paraboloid_domain();
  ExpansionContext ctx(dom, ExpansionGridSpec{64, 32, 0, 0});
  auto s = build_series(ctx, make_data("manufactured", dom), 2);
  EXPECT_LT(structural_check(ctx, s.terms[2]).trace, 1e-8);
}

TEST(DegreeLedger, BoundsHold) {
  for (auto dom : {flat_domain(), paraboloid_domain()}) {
    ExpansionContext ctx(dom, ExpansionGridSpec{32, 16, 0, 0});
    auto L = degree_ledger(ctx, 3);
    for (int j = 0; j <= 3; ++j) {
      auto meta = TermMeta::for_index(j, 2);
      EXPECT_LE(L.max_power(j), meta.denominator_power);
      EXPECT_LE(L.max_degree(j), meta.eta_degree_bound);
      // reduced form: degree j over power j + 1
      EXPECT_LE(L.max_order(j), meta.reduced_degree - 2 * meta.reduced_denominator);
    }
  }
}

TEST(DegreeLedger, FlatIsPureTangentialLaplacian) {
  auto L = degree_ledger({false, false}, {false, false}, 3);
  for (int j = 0; j <= 3; ++j) {
    ASSERT_EQ(L.levels[j].size(), 1u);
    EXPECT_EQ(L.levels[j][0].denominator_power, j + 1);
    EXPECT_EQ(L.levels[j][0].xi_degree, 2 * j);
    EXPECT_EQ(L.levels[j][0].eta_degree, 0);
  }
}

TEST(DegreeLedger, ParaboloidFirstTerm) {
  auto L = degree_ledger({true, false}, {true, false}, 1);
  // denominator power 3j+1 = 4 is reached, with numerator degree 4
  EXPECT_EQ(L.max_power(1), 4);
  EXPECT_EQ(L.max_degree(1), 4);
  bool has_odd_degree = false;
  for (const auto& s : L.levels[1]) has_odd_degree |= s.eta_degree % 2 == 1 && s.data[0] == Parity::Even;
  EXPECT_TRUE(has_odd_degree);
}

TEST(Residual, ZeroDataGivesZero) {
  auto dom = flat_domain();
  ExpansionContext ctx(dom, ExpansionGridSpec{32, 16, 0, 0});
  auto s = build_series(ctx, make_data("zero", dom), 1);
  auto r = residual(ctx, s, 1);
  EXPECT_EQ(r.forcing.max_abs(), 0.0);
}

TEST(Residual, LowFrequencyPartSaturatesCap) {
  auto dom = flat_domain();
  ExpansionContext ctx(dom, ExpansionGridSpec{64, 32, 0, 0});
  auto s = build_series(ctx, make_data("one", dom), 0);
  SpectralField low = s.h_tilde;
  std::vector<int> idx(3);
  for (std::size_t i = 0; i < low.values.size(); ++i) {
    low.grid.unflatten(i, idx.data());
    double e[2] = {low.grid.axis(0).freq(idx[0]), low.grid.axis(1).freq(idx[1])};
    low.values[i] *= 1 - ctx.cutoff()(e, 2);
  }
  auto [lo, hi] = tail_window(ctx);
  TailFit t = tail_exponent(low, lo, hi, defaults::tail_samples, defaults::tail_exponent_cap);
  EXPECT_TRUE(t.capped);
  EXPECT_EQ(t.exponent, defaults::tail_exponent_cap);
}

TEST(Residual, FlatTailImprovesFromZeroToOne) {
  auto dom = flat_domain();
  ExpansionContext ctx(dom, ExpansionGridSpec{256, 32, 0, 0});
  auto s = build_series(ctx, make_data("one", dom), 1);
  auto r0 = residual(ctx, s, 0), r1 = residual(ctx, s, 1);
  EXPECT_GE(r1.forcing_report.tail_exponent - r0.forcing_report.tail_exponent, 1.0);
  EXPECT_GT(r1.remainder_report.sobolev_index, r0.remainder_report.sobolev_index);
  EXPECT_TRUE(r1.remainder_report.proxy);
}

TEST(Residual, TermsGainSmoothness) {
  auto dom = flat_domain();
  ExpansionContext ctx(dom, ExpansionGridSpec{128, 32, 0, 0});
  auto s = build_series(ctx, make_data("one", dom), 3);
  auto [lo, hi] = tail_window(ctx);
  double prev = -INFINITY;
  for (const auto& t : s.terms) {
    double e = tail_exponent(t.data, lo, hi, defaults::tail_samples, defaults::tail_exponent_cap).exponent;
    if (t.index > 0) EXPECT_GE(e - prev, 0.5) << "j=" << t.index;
    prev = e;
  }
}
