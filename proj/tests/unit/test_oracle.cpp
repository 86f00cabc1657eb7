#include <gtest/gtest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <numbers>

#include "cornex/error.hpp"
#include "cornex/oracle.hpp"

using namespace cornex;

namespace {

constexpr double pi = std::numbers::pi;

/// Double sine series of Delta u = 1 on the unit square, odd m, n up to M.
double square_series(double x, double y, int M) {
  double s = 0;
  for (int m = 1; m <= M; m += 2)
    for (int n = 1; n <= M; n += 2)
      s -= 16 * std::sin(m * pi * x) * std::sin(n * pi * y) / (std::pow(pi, 4) * m * n * (m * m + n * n));
  return s;
}

/// Fourth-order five-point Laplacian.
double laplacian(const OracleSolution& u, std::vector<double> x, double h) {
  double lap = 0, c = u.at(x);
  for (std::size_t k = 0; k < x.size(); ++k) {
    double f[4];
    const double off[4] = {-2, -1, 1, 2};
    for (int i = 0; i < 4; ++i) {
      auto y = x;
      y[k] += off[i] * h;
      f[i] = u.at(y);
    }
    lap += (-f[0] + 16 * f[1] - 30 * c + 16 * f[2] - f[3]) / (12 * h * h);
  }
  return lap;
}

SingularFunction leading_phi() { return phi_antiderivative(phi_base({0, 1}, 1, {1, 1}), {1, 1}); }

}  // namespace

TEST(Bessel, ZerosMatchIndependentFinder) {
  for (int n = 0; n <= 6; ++n) {
    auto z = bessel_zeros(n, 25);
    for (int k = 0; k < 25; ++k)
      EXPECT_NEAR(z[k], boost::math::cyl_bessel_j_zero(static_cast<double>(n), k + 1), 1e-11 * z[k]) << n << " " << k;
  }
}

TEST(Bessel, ZerosInterlace) {
  std::vector<std::vector<double>> z;
  for (int n = 0; n <= 10; ++n) z.push_back(bessel_zeros(n, 30));
  for (int n = 0; n < 10; ++n)
    for (int k = 0; k + 1 < 30; ++k) {
      EXPECT_LT(z[n][k], z[n + 1][k]);
      EXPECT_LT(z[n + 1][k], z[n][k + 1]);
    }
}

TEST(Bessel, ManyZerosOfJ0StaySeparated) {
  auto z = bessel_zeros(0, 5000);
  for (std::size_t k = 1; k < z.size(); ++k) {
    EXPECT_GT(z[k] - z[k - 1], 3.1);
    EXPECT_LT(z[k] - z[k - 1], pi + 1e-9);
  }
  EXPECT_NEAR(z.back(), (5000 - 0.25) * pi, 1e-4);
}

TEST(Bessel, ScaledI0) {
  for (double x : {0.0, 0.5, 3.0, 29.9, 30.0, 30.1, 100.0, 600.0})
    EXPECT_NEAR(bessel_i0_scaled(x), std::cyl_bessel_i(0.0, x) * std::exp(-x), 1e-14 * std::exp(0.0)) << x;
  EXPECT_NEAR(bessel_i0_scaled(1e6) * std::sqrt(2 * pi * 1e6), 1.0, 1e-6);
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  std::vector<double> x, w;
  gauss_legendre(12, 0, 2, x, w);
  for (int k = 0; k <= 23; ++k) {
    double s = 0;
    for (int i = 0; i < 12; ++i) s += w[i] * std::pow(x[i], k);
    EXPECT_NEAR(s, std::pow(2.0, k + 1) / (k + 1), 1e-12 * std::pow(2.0, k + 1)) << k;
  }
}

TEST(FactorEigenBasis, IntervalIsOrthonormal) {
  auto b = FactorEigenBasis::build({FactorKind::Interval, 2.0}, 60);
  EXPECT_LT(b.orthonormality_defect(), 1e-10);
  EXPECT_NEAR(b.lambda(0), pi * pi / 4, 1e-12);
}

TEST(FactorEigenBasis, DiskIsOrthonormalAndOrdered) {
  auto b = FactorEigenBasis::build({FactorKind::Disk, 1.0}, 80);
  EXPECT_EQ(b.size(), 80);
  EXPECT_LT(b.orthonormality_defect(), 1e-10);
  EXPECT_NEAR(b.lambda(0), std::pow(boost::math::cyl_bessel_j_zero(0.0, 1), 2), 1e-10);
  for (int m = 0; m < b.size(); ++m) {
    EXPECT_GT(b.lambda(m), 0);
    if (m) EXPECT_LE(b.lambda(m - 1), b.lambda(m));
  }
  // cos and sin partners share the eigenvalue
  EXPECT_DOUBLE_EQ(b.lambda(1), b.lambda(2));
}

TEST(TensorSolve, SingleModeIsExact) {
  for (auto dom : {OracleDomain::square(), OracleDomain::disk_interval()}) {
    auto B1 = FactorEigenBasis::build(dom.factors[0], 8);
    auto B2 = FactorEigenBasis::build(dom.factors[1], 8);
    const int d1 = dom.factors[0].dim();
    double lam = B1.lambda(0) + B2.lambda(0);
    auto f = [&](const double* x) { return lam * B1.eval(0, x) * B2.eval(0, x + d1); };
    auto u = tensor_solve(dom, OracleData::function(f), 8);
    EXPECT_EQ(u.method, "modal");
    for (auto x : {dom.transverse_point(0.3, 0.2), dom.transverse_point(0.7, 0.6)})
      EXPECT_NEAR(u.at(x), -B1.eval(0, x.data()) * B2.eval(0, x.data() + d1), 1e-10);
  }
}

TEST(TensorSolve, ZeroDataGivesZero) {
  auto u = tensor_solve(OracleDomain::disk_interval(), OracleData::function([](const double*) { return 0.0; }), 10);
  EXPECT_EQ(u.at(OracleDomain::disk_interval().transverse_point(0.4, 0.3)), 0.0);
  auto v = tensor_solve(OracleDomain::disks(), OracleData::uniform(0));
  EXPECT_EQ(v.at({0.1, 0.2, -0.3, 0.1}), 0.0);
}

TEST(TensorSolve, SquareCenterValue) {
  auto u = tensor_solve(OracleDomain::square(), OracleData::uniform(1));
  double s1 = square_series(0.5, 0.5, 2001), s2 = square_series(0.5, 0.5, 4001);
  double richardson = s2 + (s2 - s1) / 3;
  EXPECT_NEAR(u.at({0.5, 0.5}), richardson, 1e-8);
  EXPECT_NEAR(u.at({0.5, 0.5}), -0.0736713, 1e-6);
}

TEST(TensorSolve, SquareMatchesDoubleSeries) {
  auto u = tensor_solve(OracleDomain::square(), OracleData::uniform(1));
  for (auto p : {std::vector<double>{0.2, 0.7}, {0.05, 0.1}, {0.9, 0.33}}) {
    double s1 = square_series(p[0], p[1], 1001), s2 = square_series(p[0], p[1], 2001);
    EXPECT_NEAR(u.at(p), s2 + (s2 - s1) / 3, 1e-7);
  }
}

TEST(TensorSolve, UniformDataMatchesModalProjection) {
  auto dom = OracleDomain::disk_interval();
  auto fast = tensor_solve(dom, OracleData::uniform(1));
  auto modal = tensor_solve(dom, OracleData::function([](const double*) { return 1.0; }), 120);
  auto x = dom.transverse_point(0.5, 0.5);
  EXPECT_NEAR(fast.at(x), modal.at(x), 2e-3 * std::abs(fast.at(x)));
}

TEST(TensorSolve, DisksCenterIsPinnedByTwoCaps) {
  auto a = tensor_solve(OracleDomain::disks(), OracleData::uniform(1), 400, 2000);
  auto b = tensor_solve(OracleDomain::disks(), OracleData::uniform(1), 400, 40000);
  std::vector<double> o{0, 0, 0, 0};
  EXPECT_NEAR(a.at(o), b.at(o), 1e-6);
  EXPECT_LT(a.at(o), -0.125);
  EXPECT_GT(a.at(o), -0.25);
}

TEST(TensorSolve, CauchyNearTheCorner) {
  for (auto dom : {OracleDomain::square(), OracleDomain::disk_interval(), OracleDomain::disks()}) {
    auto a = tensor_solve(dom, OracleData::uniform(1), 400, 4000);
    auto b = tensor_solve(dom, OracleData::uniform(1), 400, 40000);
    auto x = dom.transverse_point(0.02, 0.03);
    EXPECT_NEAR(a.at(x), b.at(x), 1e-6) << dom.id();
  }
}

TEST(TensorSolve, BoundaryTraceVanishes) {
  for (auto dom : {OracleDomain::square(), OracleDomain::disk_interval(), OracleDomain::disks()}) {
    auto u = tensor_solve(dom, OracleData::uniform(1));
    for (double s : {0.0, 0.1, 0.5, 0.9}) {
      EXPECT_LT(std::abs(u.at(dom.transverse_point(0.0, s))), 1e-8) << dom.id();
      EXPECT_LT(std::abs(u.at(dom.transverse_point(s, 0.0))), 1e-8) << dom.id();
    }
  }
}

TEST(TensorSolve, InteriorResidual) {
  for (auto dom : {OracleDomain::square(), OracleDomain::disk_interval(), OracleDomain::disks()}) {
    auto u = tensor_solve(dom, OracleData::uniform(1));
    for (auto y : {std::array<double, 2>{0.3, 0.4}, {0.6, 0.2}}) {
      auto x = dom.transverse_point(y[0], y[1]);
      EXPECT_NEAR(laplacian(u, x, 0.01), 1.0, 1e-6) << dom.id();
    }
  }
}

TEST(TensorSolve, TailIsReportedWhenCapBinds) {
  auto dom = OracleDomain::square();
  auto u = tensor_solve(dom, OracleData::uniform(1), 400, 50);
  EXPECT_GT(u.tail(dom.transverse_point(0.5, 1e-3).data()), 0);
  EXPECT_EQ(u.tail(dom.transverse_point(0.5, 0.5).data()), 0);
}

TEST(FdSolve, ZeroDataGivesZero) {
  auto s = fd_solve(OracleDomain::square(), [](double, double) { return 0.0; }, 16);
  for (double v : s.values) EXPECT_EQ(v, 0.0);
}

TEST(FdSolve, ManufacturedSolutionIsSecondOrder) {
  auto f = [](double x, double y) { return -2 * pi * pi * std::sin(pi * x) * std::sin(pi * y); };
  double err[2];
  for (int k = 0; k < 2; ++k) {
    auto s = fd_solve(OracleDomain::square(), f, 32 << k);
    err[k] = 0;
    for (int i = 0; i <= s.n; ++i)
      for (int j = 0; j <= s.n; ++j)
        err[k] = std::max(err[k], std::abs(s.node(i, j) - std::sin(pi * i * s.h) * std::sin(pi * j * s.h)));
  }
  EXPECT_GE(std::log2(err[0] / err[1]), 1.9);
}

TEST(FdSolve, AgreesWithTensorSolve) {
  auto u = tensor_solve(OracleDomain::square(), OracleData::uniform(1));
  double err[2];
  for (int k = 0; k < 2; ++k) {
    auto s = fd_solve(OracleDomain::square(), [](double, double) { return 1.0; }, 32 << k);
    err[k] = 0;
    for (int i = 1; i < s.n; ++i)
      for (int j = 1; j < s.n; ++j) err[k] = std::max(err[k], std::abs(s.node(i, j) - u.at({i * s.h, j * s.h})));
  }
  EXPECT_LT(err[1], 1e-4);
  EXPECT_GT(err[0] / err[1], 3.0);
}

TEST(RegularityMeter, LogModelIsLogDivergentAtOrderTwo) {
  auto u = [](double x, double y) {
    double Q = x * x + y * y;
    return Q * std::log(Q);
  };
  auto rep = regularity_meter(u, MeterSpec::corner());
  EXPECT_EQ(rep.orders[0].signature, Signature::Bounded);
  EXPECT_EQ(rep.orders[1].signature, Signature::LogDivergent);
  EXPECT_NEAR(rep.orders[1].slope, 0, 0.5);
  EXPECT_GT(rep.orders[1].log_coeff, 0);
}

TEST(RegularityMeter, PolynomialIsBounded) {
  auto u = [](double x, double y) { return 1 + x - 2 * y + x * x * y + 3 * std::pow(x, 4) - x * std::pow(y, 3); };
  auto rep = regularity_meter(u, MeterSpec::corner());
  EXPECT_TRUE(rep.bounded_through(4));
}

TEST(RegularityMeter, PowerSingularity) {
  auto u = [](double x, double y) { return std::pow(x * x + y * y, 0.75); };
  auto rep = regularity_meter(u, MeterSpec::corner());
  EXPECT_EQ(rep.orders[1].signature, Signature::PowerDivergent);
  EXPECT_NEAR(rep.orders[1].slope, -0.5, 0.05);
}

TEST(SingularFit, RecoversKnownCoefficient) {
  auto phi = leading_phi();
  auto u = [&](double x, double y) {
    double v[2] = {x, y};
    return (cplx(0, 3) * phi(v)).real() + 0.2 - x + 0.5 * x * y + y * y * y;
  };
  auto fit = fit_singular_coefficients(u, {phi}, FitWindow{});
  EXPECT_NEAR(fit.coefficients[0].imag(), 3.0, 0.03);
  EXPECT_NEAR(fit.coefficients[0].real(), 0.0, 0.03);
  EXPECT_LT(fit.relative_residual, 1e-10);
  EXPECT_NEAR(fit.polynomial[0], 0.2, 1e-8);
}

TEST(SingularFit, IllConditionedBasisIsReported) {
  auto phi = leading_phi();
  EXPECT_THROW(fit_singular_coefficients([](double, double) { return 1.0; }, {phi, phi}, FitWindow{}), FitError);
}

TEST(SingularFit, SquareCoefficientIsStableAcrossWindows) {
  auto u = tensor_solve(OracleDomain::square(), OracleData::uniform(1)).transverse();
  auto phi = leading_phi();
  auto a = fit_singular_coefficients(u, {phi}, FitWindow{0.02, 0.05});
  auto b = fit_singular_coefficients(u, {phi}, FitWindow{0.04, 0.1});
  EXPECT_GT(std::abs(a.coefficients[0]), 1e-3);
  EXPECT_LT(std::abs(a.coefficients[0] - b.coefficients[0]) / std::abs(a.coefficients[0]), 0.02);
  EXPECT_NEAR(a.coefficients[0].imag(), 2 / pi, 1e-3);
}

TEST(SingularFit, DisksProfileFitsLeadingTerm) {
  auto u = tensor_solve(OracleDomain::disks(), OracleData::uniform(1)).transverse();
  auto fit = fit_singular_coefficients(u, {leading_phi()}, FitWindow{}, 3);
  EXPECT_LT(fit.relative_residual, 0.05);
  EXPECT_NEAR(fit.coefficients[0].imag(), 2 / pi, 0.02);
}

TEST(SingularFit, SubtractionRemovesLogGrowth) {
  auto u = tensor_solve(OracleDomain::square(), OracleData::uniform(1)).transverse();
  auto phi = leading_phi();
  auto fit = fit_singular_coefficients(u, {phi}, FitWindow{});
  auto before = regularity_meter(u, MeterSpec::corner());
  auto after = regularity_meter(subtract_fit(u, {phi}, fit), MeterSpec::corner());
  const auto &b = before.orders[1], &a = after.orders[1];
  EXPECT_EQ(b.signature, Signature::LogDivergent);
  EXPECT_GT(b.log_coeff, 5 * b.log_stderr);
  EXPECT_GE(std::abs(b.log_coeff) / std::abs(a.log_coeff), 10.0);
  EXPECT_NE(a.signature, Signature::LogDivergent);
}

TEST(AwayFromCorner, EdgeMidpointIsSmooth) {
  auto u = tensor_solve(OracleDomain::square(), OracleData::uniform(1)).transverse();
  EXPECT_TRUE(away_from_corner_check(u, MeterSpec::edge(0.5)).bounded);
}

TEST(AwayFromCorner, InteriorIsSmooth) {
  auto u = tensor_solve(OracleDomain::square(), OracleData::uniform(1)).transverse();
  EXPECT_TRUE(away_from_corner_check(u, MeterSpec::interior(0.5, 0.4)).bounded);
}

TEST(AwayFromCorner, CornerIsNotSmooth) {
  auto u = tensor_solve(OracleDomain::square(), OracleData::uniform(1)).transverse();
  auto rep = away_from_corner_check(u, MeterSpec::corner());
  EXPECT_FALSE(rep.bounded);
  EXPECT_NE(rep.meter.orders[1].signature, Signature::Bounded);
}

TEST(OracleDomain, ParseAndIds) {
  auto d = OracleDomain::parse("disk:2,interval:0.5");
  EXPECT_EQ(d.dim(), 3);
  EXPECT_EQ(d.id(), "disk:2,interval:0.5");
  EXPECT_THROW(OracleDomain::parse("sphere:1"), ShapeError);
  EXPECT_THROW(OracleDomain::parse("disk:-1"), ShapeError);
  auto x = d.transverse_point(0.1, 0.2);
  auto dist = d.boundary_distance(x.data());
  EXPECT_NEAR(dist[0], 0.1, 1e-15);
  EXPECT_NEAR(dist[1], 0.2, 1e-15);
}
