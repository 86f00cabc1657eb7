#include "cornex/acceptance.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "cornex/error.hpp"
#include "cornex/expansion.hpp"
#include "cornex/ft_check.hpp"
#include "cornex/matcher.hpp"
#include "cornex/oracle.hpp"

namespace cornex {

namespace {

constexpr double pi = std::numbers::pi;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

SingularFunction leading_phi() { return phi_antiderivative(phi_base({0, 1}, 1, {1, 1}), {1, 1}); }

/// Transforms of the odd and even extensions of g, for g decaying like a Gaussian.
struct HalfTransform {
  cplx odd, even;
};

HalfTransform half_transform(const std::function<double(double)>& g, double eta) {
  using gk = boost::math::quadrature::gauss_kronrod<double, 61>;
  double c = gk::integrate([&](double y) { return g(y) * std::cos(eta * y); }, 0.0, 12.0, 15, 1e-14);
  double s = gk::integrate([&](double y) { return g(y) * std::sin(eta * y); }, 0.0, 12.0, 15, 1e-14);
  // odd: 2i int_0^inf g sin, even: 2 int_0^inf g cos
  return {cplx(0, 2 * s), cplx(2 * c, 0)};
}

/// Continuous identity FT(even g') + i eta FT(odd g) = -2 g(0); returns the
/// largest defect over a few frequencies.
double delta_term_defect(const std::function<double(double)>& g, const std::function<double(double)>& dg) {
  double worst = 0;
  for (double eta : {0.5, 1.3, 2.7, 5.0}) {
    auto G = half_transform(g, eta);
    auto D = half_transform(dg, eta);
    cplx lhs = D.even + cplx(0, eta) * G.odd;
    worst = std::max(worst, std::abs(lhs + 2 * g(0)));
  }
  return worst;
}

CriterionResult transform_identities() {
  CriterionResult r{1, "transform-identities", false, 0, 10, {}, {}};
  auto grid = TensorGrid::uniform(2, 2, 128, 8.0);
  auto g = [](double s) { return std::sin(2 * s) * std::exp(-s * s); };
  auto dg = [](double s) { return (2 * std::cos(2 * s) - 2 * s * std::sin(2 * s)) * std::exp(-s * s); };
  auto w = [](double s) { return std::exp(-(s - 0.3) * (s - 0.3)) * (1 + 0.2 * s); };
  double grid_defect = 0, jump = 0;
  for (int axis : {0, 1}) {
    int other = 1 - axis;
    auto half = [&](const std::function<double(double)>& fn) {
      return GridFunction::sample(grid, [&](const double* y) {
        return cplx(y[axis] >= 0 ? fn(y[axis]) * w(y[other]) : 0.0, 0.0);
      });
    };
    auto odd = reflect(half(g), axis, Parity::Odd);
    auto even = reflect(half(dg), axis, Parity::Even);
    jump = std::max(jump, odd.boundary_jump);
    auto Fo = partial_ft(odd.f, {axis});
    auto Fe = partial_ft(even.f, {axis});
    auto rhs = apply_symbol(Fo, [axis](const double* c) { return cplx(0, -c[axis]); });
    double scale = Fe.max_abs(), d = 0;
    for (std::size_t i = 0; i < Fe.values.size(); ++i) d = std::max(d, std::abs(Fe.values[i] - rhs.values[i]));
    grid_defect = std::max(grid_defect, d / scale);
  }
  // zero trace, not odd-smooth: the delta term still vanishes
  double zero_trace = delta_term_defect([](double s) { return s * (1 + s) * std::exp(-s * s); },
                                        [](double s) { return (1 + 2 * s - 2 * s * s - 2 * s * s * s) * std::exp(-s * s); });
  // nonzero trace: the identity holds with the delta term -2 g(0)
  double with_trace = delta_term_defect([](double s) { return std::cos(2 * s) * std::exp(-s * s); },
                                        [](double s) {
                                          return (-2 * std::sin(2 * s) - 2 * s * std::cos(2 * s)) * std::exp(-s * s);
                                        });
  r.metrics = {{"grid_defect", grid_defect}, {"boundary_jump", jump}, {"delta_zero_trace", zero_trace},
               {"delta_with_trace", with_trace}};
  r.passed = grid_defect < 1e-8 && jump < 1e-8 && zero_trace < 1e-8 && with_trace < 1e-8;
  r.detail = "derivative identity " + fmt(grid_defect) + ", delta term " + fmt(zero_trace) + " at zero trace";
  return r;
}

CriterionResult structural_invariants() {
  CriterionResult r{2, "structural-invariants", false, 0, 120, {}, {}};
  double odd = 0, trace = 0;
  bool ledger = true;
  std::string first;
  for (const char* g : {"flat", "paraboloid:1"}) {
    auto dom = make_domain({g, "flat"}, {2, 1}, defaults::local_radius);
    ExpansionContext ctx(dom, ExpansionGridSpec{64, 32, 0, 0});
    auto s = build_series(ctx, make_data("one", dom), 3);
    auto L = degree_ledger(ctx, 3);
    for (const auto& t : s.terms) {
      auto rep = structural_check(ctx, t);
      for (double o : rep.oddness) odd = std::max(odd, o);
      trace = std::max(trace, rep.trace);
      auto meta = TermMeta::for_index(t.index, 2);
      bool exact = rep.denominator_power == 3 * t.index + 1 && L.max_power(t.index) <= meta.denominator_power &&
                   L.max_degree(t.index) <= meta.eta_degree_bound;
      if (!exact && first.empty()) first = std::string(g) + " j=" + std::to_string(t.index);
      ledger = ledger && exact;
    }
  }
  r.metrics = {{"oddness", odd}, {"trace", trace}, {"ledger_exact", ledger ? 1.0 : 0.0}};
  r.passed = odd < 1e-10 && trace < 1e-8 && ledger;
  r.detail = "oddness " + fmt(odd) + ", trace " + fmt(trace) + (ledger ? ", ledger exact" : ", ledger off at " + first);
  return r;
}

std::vector<double> forcing_tails(const char* geometry, int nodes) {
  auto dom = make_domain({geometry, "flat"}, {2, 1}, defaults::local_radius);
  ExpansionContext ctx(dom, ExpansionGridSpec{nodes, 32, 0, 0});
  auto s = build_series(ctx, make_data("one", dom), 3);
  std::vector<double> e;
  for (int N = 0; N <= 3; ++N) e.push_back(residual(ctx, s, N).forcing_report.tail_exponent);
  return e;
}

CriterionResult smoothness_gain() {
  CriterionResult r{3, "smoothness-gain", false, 0, 300, {}, {}};
  auto e = forcing_tails("flat", 256);
  double gain = INFINITY;
  for (int N = 0; N <= 3; ++N) r.metrics.push_back({"tail_N" + std::to_string(N), e[N]});
  for (int N = 1; N <= 3; ++N) gain = std::min(gain, e[N] - e[N - 1]);
  r.metrics.push_back({"min_gain", gain});
  r.passed = gain >= 0.5;
  r.detail = "flat model, tails";
  for (double v : e) r.detail += " " + fmt(v);
  // reported only: the paraboloid tails stall (see README)
  auto p = forcing_tails("paraboloid:1", 128);
  double pgain = INFINITY;
  for (int N = 1; N <= 3; ++N) pgain = std::min(pgain, p[N] - p[N - 1]);
  r.metrics.push_back({"paraboloid_min_gain", pgain});
  r.detail += "; paraboloid min gain " + fmt(pgain);
  return r;
}

CriterionResult ode_construction() {
  CriterionResult r{4, "ode-construction", false, 0, 1, {}, {}};
  std::vector<double> a{1.0, 1.0};
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> U(-1, 1);
  double worst = 0;
  for (int l = 2; l <= 4; ++l) {
    auto hi = phi_base({0, 1}, l, a);
    auto lo = phi_base({0, 1}, l - 1, a);
    auto dp1 = hi.p1.derivative(0), dp2 = hi.p2.derivative(0);
    for (int s = 0; s < 2000; ++s) {
      double y[2] = {U(rng), U(rng)};
      if (std::hypot(y[0], y[1]) < defaults::ode_exclusion_radius) continue;
      double Q = hi.Q(y);
      cplx d = dp1(y) * std::log(Q) + hi.p1(y) * (2 * y[0] / a[0]) / Q + dp2(y);
      worst = std::max(worst, std::abs(d - y[0] * lo(y)));
    }
  }
  r.metrics = {{"residual", worst}};
  r.passed = worst < defaults::ode_residual_tol;
  r.detail = "max residual " + fmt(worst) + " for l = 2..4";
  return r;
}

CriterionResult fourier_identity() {
  CriterionResult r{5, "fourier-identity", false, 0, 600, {}, {}};
  struct Case {
    int dims, l;
    std::vector<int> k;
  };
  const Case cases[] = {{2, 1, {0, 0}}, {2, 1, {1, 0}}, {2, 2, {0, 0}}, {4, 1, {0, 0, 0, 0}}};
  bool ok = true;
  double worst = 0;
  for (const auto& c : cases) {
    std::vector<int> p;
    for (int i = 0; i < c.dims; ++i) p.push_back(i);
    auto phi = phi_antiderivative(phi_base(p, c.l, std::vector<double>(c.dims, 1.0)), c.k);
    auto res = ft_check(phi, default_ft_config(c.dims));
    bool pass = res.stability < 0.01 && res.remainder.certified_through(4);
    ok = ok && pass;
    worst = std::max(worst, res.stability);
    r.metrics.push_back({phi.id() + " stability", res.stability});
    if (!pass) r.detail += phi.id() + " failed (" + res.note + "); ";
  }
  r.passed = ok;
  r.detail += "worst stability " + fmt(worst);
  return r;
}

CriterionResult nontriviality() {
  CriterionResult r{6, "nontriviality", false, 0, 0, {}, {}};
  auto dom = make_domain({"flat", "flat"}, {1, 1}, defaults::local_radius);
  AssembleOptions opt;
  opt.certify = false;
  auto ex = assemble_expansion(make_data("one", dom), dom, 1, opt);
  cplx c = 0;
  const SingularFunction* basis = nullptr;
  for (const auto& t : ex.terms)
    if (t.id() == leading_phi().id()) {
      c = t.c;
      basis = &t.basis;
    }
  if (!basis) {
    r.detail = "no leading log term emitted";
    return r;
  }
  auto u = tensor_solve(OracleDomain::square(), OracleData::uniform(1)).transverse();
  auto fit = fit_singular_coefficients(u, {*basis}, FitWindow{});
  double rel = std::abs(fit.coefficients[0] - c) / std::abs(fit.coefficients[0]);
  r.metrics = {{"c_matcher_imag", c.imag()}, {"c_oracle_imag", fit.coefficients[0].imag()}, {"relative_gap", rel}};
  r.passed = std::abs(c) > 1e-3 && rel < defaults::agreement_tol;
  r.detail = "matcher " + fmt(c.imag()) + "i, oracle " + fmt(fit.coefficients[0].imag()) + "i, gap " + fmt(rel);
  return r;
}

CriterionResult singular_subtraction() {
  CriterionResult r{7, "singular-subtraction", false, 0, 60, {}, {}};
  auto u = tensor_solve(OracleDomain::square(), OracleData::uniform(1)).transverse();
  auto phi = leading_phi();
  auto fit = fit_singular_coefficients(u, {phi}, FitWindow{});
  auto before = regularity_meter(u, MeterSpec::corner());
  auto after = regularity_meter(subtract_fit(u, {phi}, fit), MeterSpec::corner());
  const auto &b = before.orders[1], &a = after.orders[1];
  double drop = std::abs(b.log_coeff) / std::max(std::abs(a.log_coeff), 1e-300);
  double sigmas = b.log_coeff / b.log_stderr;
  r.metrics = {{"log_coeff_before", b.log_coeff}, {"log_coeff_after", a.log_coeff}, {"drop", drop},
               {"sigmas_before", sigmas}};
  r.passed = b.signature == Signature::LogDivergent && sigmas > defaults::log_signature_sigmas &&
             drop >= defaults::subtraction_gain;
  r.detail = "log coefficient " + fmt(b.log_coeff) + " -> " + fmt(a.log_coeff) + " (" + fmt(drop) + "x)";
  return r;
}

CriterionResult disks_profile() {
  CriterionResult r{8, "disks-profile", false, 0, 300, {}, {}};
  auto u = tensor_solve(OracleDomain::disks(), OracleData::uniform(1)).transverse();
  auto fit = fit_singular_coefficients(u, {leading_phi()}, FitWindow{}, 3);
  r.metrics = {{"relative_residual", fit.relative_residual}, {"c_imag", fit.coefficients[0].imag()}};
  r.passed = fit.relative_residual < 0.05;
  r.detail = "residual " + fmt(fit.relative_residual) + ", c " + fmt(fit.coefficients[0].imag()) + "i";
  return r;
}

CriterionResult single_boundary() {
  CriterionResult r{9, "single-boundary", false, 0, 0, {}, {}};
  auto u = tensor_solve(OracleDomain::square(), OracleData::uniform(1)).transverse();
  bool edges = true;
  int windows = 0;
  for (const auto& spec : {MeterSpec::edge(0.5), MeterSpec::edge(0.3), MeterSpec::interior(0.5, 0.4)}) {
    edges = edges && away_from_corner_check(u, spec).bounded;
    ++windows;
  }
  auto corner = away_from_corner_check(u, MeterSpec::corner());
  r.metrics = {{"windows_bounded", edges ? 1.0 : 0.0}, {"corner_bounded", corner.bounded ? 1.0 : 0.0}};
  r.passed = edges && !corner.bounded;
  r.detail = std::to_string(windows) + " windows " + (edges ? "bounded" : "not bounded") + ", corner " +
             to_string(corner.meter.worst_through(4));
  return r;
}

}  // namespace

CriterionResult run_criterion(int id) {
  auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    switch (id) {
      case 1: r = transform_identities(); break;
      case 2: r = structural_invariants(); break;
      case 3: r = smoothness_gain(); break;
      case 4: r = ode_construction(); break;
      case 5: r = fourier_identity(); break;
      case 6: r = nontriviality(); break;
      case 7: r = singular_subtraction(); break;
      case 8: r = disks_profile(); break;
      case 9: r = single_boundary(); break;
      default: throw ConfigError("criterion", "no criterion " + std::to_string(id));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    static const char* names[] = {"",           "transform-identities", "structural-invariants",
                                  "smoothness-gain", "ode-construction", "fourier-identity",
                                  "nontriviality", "singular-subtraction", "disks-profile", "single-boundary"};
    r.id = id;
    r.name = names[id];
    r.passed = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.budget > 0 && r.seconds > r.budget) {
    r.passed = false;
    r.detail += "; over budget";
  }
  return r;
}

std::vector<CriterionResult> run_acceptance(const std::vector<int>& only) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 9; ++id)
    if (only.empty() || std::find(only.begin(), only.end(), id) != only.end()) out.push_back(run_criterion(id));
  return out;
}

std::string summary_line(const CriterionResult& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, " (%.1f s)", r.seconds);
  return std::string(r.passed ? "PASS " : "FAIL ") + std::to_string(r.id) + " " + r.name + buf + ": " + r.detail;
}

}  // namespace cornex
