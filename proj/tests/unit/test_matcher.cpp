#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cornex/data.hpp"
#include "cornex/error.hpp"
#include "cornex/matcher.hpp"
#include "cornex/oracle.hpp"

using namespace cornex;

namespace {
constexpr double pi = std::numbers::pi;

ProductDomainSpec flat2() { return make_domain({"flat", "flat"}, {1, 1}, 0.5); }

std::vector<std::array<double, 2>> annulus_etas(double r1, double theta) {
  std::vector<std::array<double, 2>> etas;
  for (int k = 0; k < 4; ++k) {
    double r = r1 * (1 + k / 4.0);
    etas.push_back({r * std::cos(theta), r * std::sin(theta)});
  }
  return etas;
}

AssembleOptions quick() {
  AssembleOptions o;
  o.certify = false;
  o.grid.corner_nodes = 64;
  o.grid.tangential_nodes = 16;
  return o;
}

cplx coefficient(const ExpansionResult& r, const std::string& id) {
  for (const auto& t : r.terms)
    if (t.id() == id) return t.c;
  return 0.0;
}

DataFunction combination(const DataFunction& f, double a, const DataFunction& g, double b) {
  DataFunction h;
  h.preset = "combination";
  h.n = f.n;
  h.value = [=](const double* x) { return a * f(x) + b * g(x); };
  h.jet = [=](const Jet* x) { return f(x) * a + g(x) * b; };
  return h;
}

const std::string leading_id = "p=1,2;l=1;k=1,1";
}  // namespace

TEST(IbpExpand, VanishingDataHasNoLowTraces) {
  auto dom = flat2();
  auto L = ibp_expand(dom, make_data("vanishing:4", dom), 2);
  for (const auto& t : L.traces)
    if (t.alpha[0] + t.alpha[1] <= 4) EXPECT_LT(std::abs(t.value), 1e-10);
}

TEST(IbpExpand, ConstantDataHasUnitZerothTrace) {
  auto dom = flat2();
  auto L = ibp_expand(dom, make_data("one", dom), 1);
  ASSERT_FALSE(L.traces.empty());
  EXPECT_EQ(L.traces[0].alpha, (std::vector<int>{0, 0}));
  EXPECT_NEAR(L.traces[0].value, 1.0, 1e-14);
  EXPECT_EQ(L.traces[0].weight, 4.0);
}

TEST(IbpExpand, RemainderOrderIsEven) {
  auto dom = flat2();
  for (int N : {0, 1, 3}) {
    auto L = ibp_expand(dom, make_data("manufactured", dom), N);
    EXPECT_EQ(L.order, 2 * (N + 2));
    for (const auto& r : L.remainders) EXPECT_EQ(r.order, L.order);
  }
}

TEST(IbpExpand, LedgerResumsTransformOnAnnulus) {
  auto dom = flat2();
  for (const char* preset : {"one", "corner_bump:0.25", "manufactured"}) {
    auto f = make_data(preset, dom);
    auto L = ibp_expand(dom, f, 0);
    for (double theta : {0.3, pi / 4})
      EXPECT_LT(ibp_reconstruction_error(dom, f, L, annulus_etas(2 * pi, theta)), defaults::ibp_reconstruction_tol)
          << preset;
  }
}

TEST(GeometricSplit, IdentityHoldsOnSymbols) {
  std::vector<double> a{1.3, 0.7};
  for (int S : {1, 2, 3})
    for (int m : {0, 1})
      EXPECT_LT(split_identity_defect(a, {2.5, -4.0}, m, S), 1e-13);
}

TEST(GeometricSplit, PadsSeriesLengthToEvenOrder) {
  auto dom = flat2();
  auto f = make_data("one", dom);
  ExpansionGridSpec gs;
  gs.corner_nodes = 32;
  ExpansionContext ctx(dom, gs);
  auto L = ibp_expand(dom, f, 1);
  auto s = geometric_split(ctx, refined(ctx), f, L.remainders[0], 1);
  EXPECT_EQ(s.N, 2);
  EXPECT_EQ(s.terms, 3);
}

TEST(GeometricSplit, FinalTermIsC2) {
  auto dom = flat2();
  auto f = make_data("one", dom);
  ExpansionGridSpec gs;
  gs.corner_nodes = 256;
  ExpansionContext ctx(dom, gs);
  auto fine = refined(ctx);
  auto L = ibp_expand(dom, f, 2);
  for (int ax : {0, 1}) {
    RemainderEntry e{ax, std::vector<int>(ax, 0), L.order};
    auto s = geometric_split(ctx, fine, f, e, 2);
    EXPECT_TRUE(s.certified) << "axis " << ax;
  }
}

TEST(FactorCutoff, DiscardedDifferenceIsSmooth) {
  auto dom = flat2();
  ExpansionGridSpec gs;
  gs.corner_nodes = 256;
  ExpansionContext ctx(dom, gs);
  auto c = factor_cutoff(ctx, refined(ctx), make_data("one", dom), 0);
  EXPECT_GT(c.discarded_ratio, 0);
  EXPECT_TRUE(c.certified);
}

TEST(FactorCutoff, ProductCutoffDiscardsNothing) {
  auto dom = flat2();
  ExpansionGridSpec gs;
  gs.corner_nodes = 64;
  ExpansionContext base(dom, gs);
  CutoffSpec prod = base.cutoff();
  prod.kind = CutoffSpec::Kind::PerAxisFrequency;
  ExpansionContext ctx(dom, base.grid(), prod);
  auto c = factor_cutoff(ctx, refined(ctx), make_data("manufactured", dom), 0);
  EXPECT_EQ(c.discarded_ratio, 0.0);
  for (double v : c.measure.fine) EXPECT_EQ(v, 0.0);
}

TEST(MatchTerms, BareInverseGivesLeadingFunction) {
  SymbolTerm t;
  t.coef = -1;
  t.ext = {Parity::Odd, Parity::Odd};
  t.beta = {0, 0};
  t.l = 1;
  MatchOptions mo;
  mo.max_strength = 2;
  auto m = match_terms(t, [](const std::vector<int>& a, int) { return a[0] + a[1] == 0 ? 1.0 : 0.0; }, 2, mo, nullptr);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].id(), leading_id);
  EXPECT_NEAR(m[0].c.imag(), 2 / pi, 2e-3);
  EXPECT_NEAR(m[0].c.real(), 0.0, 1e-12);
}

TEST(MatchTerms, EtaNumeratorUsesDerivativeRelation) {
  // chi eta_1^2 / Sigma^2 with one trace: the second eta_1 becomes d/dy1 of Phi_{2,(0,1)}
  SymbolTerm t;
  t.ext = {Parity::Odd, Parity::Odd};
  t.beta = {2, 0};
  t.l = 2;
  MatchOptions mo;
  mo.max_strength = 6;
  mo.max_trace_order = 0;
  std::vector<std::string> errors;
  auto m = match_terms(t, [](const std::vector<int>&, int) { return 1.0; }, 2, mo, &errors);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_TRUE(errors.empty());
  EXPECT_EQ(m[0].basis.times_coordinate, 0);
  EXPECT_EQ(m[0].basis.l, 1);

  // the emitted y1 Phi_1 pattern is the derivative of Phi_{2,(0,1)}, up to the relation factor
  auto phi = phi_antiderivative(phi_base({0, 1}, 2, {1, 1}), {0, 1});
  auto rel = phi_derivative(phi, 0);
  const double h = 1e-5;
  for (auto y : {std::array<double, 2>{0.3, 0.2}, {0.1, 0.45}}) {
    double p[2] = {y[0] + h, y[1]}, q[2] = {y[0] - h, y[1]};
    cplx fd = (phi(p) - phi(q)) / (2 * h);
    cplx smooth = rel.smooth(y.data());
    EXPECT_NEAR(std::abs(fd - rel.factor * m[0].basis(y.data()) - smooth), 0.0, 1e-7);
  }
}

TEST(MatchTerms, LeavingTheFamilyIsReported) {
  SymbolTerm t;
  t.ext = {Parity::Odd, Parity::Odd};
  t.beta = {2, 0};
  t.l = 1;
  t.provenance = "probe";
  MatchOptions mo;
  mo.max_trace_order = 0;
  std::vector<std::string> errors;
  auto m = match_terms(t, [](const std::vector<int>&, int) { return 1.0; }, 2, mo, &errors);
  EXPECT_TRUE(m.empty());
  ASSERT_EQ(errors.size(), 1u);
  EXPECT_NE(errors[0].find("probe"), std::string::npos);
}

TEST(CombineTerms, SumsEqualIdsAndSortsByStrength) {
  auto a = phi_base({0, 1}, 1, {1, 1});
  MatchedTerm x{cplx(0, 1), phi_antiderivative(a, {1, 3}), {}, {"x"}};
  MatchedTerm y{cplx(0, 2), phi_antiderivative(a, {1, 1}), {}, {"y"}};
  MatchedTerm z{cplx(0, -1), phi_antiderivative(a, {1, 3}), {}, {"z"}};
  auto out = combine_terms({x, y, z});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].id(), leading_id);
}

TEST(Assemble, ZeroDataGivesEmptyExpansion) {
  auto dom = flat2();
  auto r = assemble_expansion(make_data("zero", dom), dom, 2, quick());
  EXPECT_TRUE(r.terms.empty());
  EXPECT_TRUE(r.errors.empty());
}

TEST(Assemble, ConstantDataHasNonzeroLogTerm) {
  for (auto dom : {flat2(), make_domain({"paraboloid", "flat"}, {2, 1}, 0.5)}) {
    auto r = assemble_expansion(make_data("one", dom), dom, 1, quick());
    ASSERT_FALSE(r.terms.empty());
    const auto& lead = r.terms[0];
    EXPECT_EQ(lead.id(), leading_id);
    EXPECT_EQ(lead.basis.base_kind, SingularFunction::Kind::PolyLog);
    EXPECT_GT(std::abs(lead.c), 1e-3);
    EXPECT_NEAR(lead.c.imag(), 2 / pi, 2e-3);
  }
}

TEST(Assemble, NumericLeadingAgreesWithMatcher) {
  auto dom = flat2();
  for (const char* preset : {"one", "corner_bump:0.25"}) {
    auto r = assemble_expansion(make_data(preset, dom), dom, 0, quick());
    cplx c = coefficient(r, leading_id);
    EXPECT_LT(std::abs(r.numeric_leading - c) / std::abs(c), 0.03) << preset;
  }
}

TEST(Assemble, IndexRangeOverRandomInputs) {
  std::mt19937 rng(7);
  const std::vector<std::vector<std::string>> geoms{{"flat", "flat"}, {"paraboloid", "flat"}, {"disk", "flat"}};
  const std::vector<std::string> data{"one", "corner_bump:0.3", "manufactured", "vanishing:2"};
  for (int trial = 0; trial < 6; ++trial) {
    auto g = geoms[rng() % geoms.size()];
    auto dom = make_domain(g, g[0] == "flat" && g[1] == "flat" ? std::vector<int>{1, 1} : std::vector<int>{2, 1}, 0.5);
    auto r = assemble_expansion(make_data(data[rng() % data.size()], dom), dom, 1 + static_cast<int>(rng() % 2), quick());
    for (const auto& t : r.terms) {
      EXPECT_GE(t.basis.l, 1);
      EXPECT_GE(t.basis.dim(), 2);
      EXPECT_LE(t.basis.dim(), dom.q());
      for (int k : t.basis.k) EXPECT_GE(k, 0);
    }
  }
}

TEST(Assemble, CoefficientsAreLinearInData) {
  auto dom = make_domain({"paraboloid", "flat"}, {2, 1}, 0.5);
  auto f = make_data("manufactured", dom), g = make_data("corner_bump:0.3", dom);
  auto rf = assemble_expansion(f, dom, 2, quick());
  auto rg = assemble_expansion(g, dom, 2, quick());
  auto rh = assemble_expansion(combination(f, 2.0, g, -0.5), dom, 2, quick());
  ASSERT_FALSE(rh.terms.empty());
  for (const auto& t : rh.terms) {
    cplx expect = 2.0 * coefficient(rf, t.id()) - 0.5 * coefficient(rg, t.id());
    EXPECT_LT(std::abs(t.c - expect), 1e-8 * (1 + std::abs(expect))) << t.id();
  }
}

TEST(Assemble, SingularPartIsReal) {
  auto dom = flat2();
  auto r = assemble_expansion(make_data("manufactured", dom), dom, 2, quick());
  EXPECT_LT(r.imaginary_ratio, 1e-6);
}

TEST(Assemble, StableUnderRefinementAndCutoffRadius) {
  auto dom = make_domain({"paraboloid", "flat"}, {2, 1}, 0.5);
  auto f = make_data("manufactured", dom);
  auto base = assemble_expansion(f, dom, 1, quick());
  auto o = quick();
  o.grid.corner_nodes *= 2;
  auto fine = assemble_expansion(f, dom, 1, o);
  auto wide_dom = make_domain({"paraboloid", "flat"}, {2, 1}, 0.625);
  auto wide = assemble_expansion(make_data("manufactured", wide_dom), wide_dom, 1, quick());
  ASSERT_FALSE(base.terms.empty());
  for (const auto& t : base.terms) {
    EXPECT_LT(std::abs(coefficient(fine, t.id()) - t.c) / std::abs(t.c), 0.02) << t.id();
    EXPECT_LT(std::abs(coefficient(wide, t.id()) - t.c) / std::abs(t.c), 0.02) << t.id();
  }
}

TEST(Assemble, FlatCornerBumpMatchesOracleFit) {
  auto dom = flat2();
  auto f = make_data("corner_bump:0.25", dom);
  auto r = assemble_expansion(f, dom, 0, quick());
  auto u = tensor_solve(OracleDomain::square(), OracleData::function(f.value), 800).transverse();
  auto fit = fit_singular_coefficients(u, {r.terms[0].basis}, FitWindow{}, 5);
  EXPECT_LT(std::abs(fit.coefficients[0] - r.terms[0].c) / std::abs(r.terms[0].c), 0.05);
}

TEST(Assemble, CertificationRunsOnRequest) {
  auto dom = flat2();
  AssembleOptions o;
  o.grid.corner_nodes = 128;
  auto r = assemble_expansion(make_data("corner_bump:0.25", dom), dom, 2, o);
  EXPECT_EQ(r.cutoff_checks.size(), 3u);
  ASSERT_EQ(r.split_checks.size(), 2u);
  for (const auto& s : r.split_checks) EXPECT_TRUE(s.certified);
}
