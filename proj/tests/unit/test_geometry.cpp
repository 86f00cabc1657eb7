#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cornex/error.hpp"
#include "cornex/geometry.hpp"

using namespace cornex;

namespace {

ProductDomainSpec paraboloid_domain() { return make_domain({"paraboloid:1", "flat"}, {2, 1}, 0.5); }

}  // namespace

TEST(Geometry, FlatCaseIsIdentity) {
  auto T = build_transform(make_domain({"flat", "flat"}, {2, 2}, 0.5));
  double y[4] = {0.1, 0.2, -0.3, 0.05};
  double xi[2] = {1.5, -2.0};
  double eta[2] = {0.7, 3.0};
  EXPECT_TRUE(T.jacobian(y).isApprox(Eigen::MatrixXd::Identity(4, 4)));
  EXPECT_DOUBLE_EQ(T.a(0, y), 1.0);
  EXPECT_EQ(T.B(0, y, xi), cplx(0, 0));
  EXPECT_DOUBLE_EQ(T.C(y, xi), 1.5 * 1.5 + 4.0);
  cplx P = T.P(y, xi, eta);
  EXPECT_EQ(P, cplx(-(0.49 + 9.0 + 2.25 + 4.0), 0.0));
}

TEST(Geometry, ParaboloidCoefficients) {
  auto T = build_transform(paraboloid_domain());
  double y[3] = {0.1, 0.2, 0.3};
  EXPECT_NEAR(T.a(0, y), 1 + 0.09, 1e-15);
  // cross term -2t multiplying d^2/dt dy1 -> metric entry -t
  Eigen::MatrixXd g = T.metric_from_operator(y);
  EXPECT_NEAR(2 * g(0, 2), -2 * 0.3, 1e-15);
  EXPECT_NEAR(T.first_order_coeff(0, y), -1.0, 1e-15);
}

TEST(Geometry, LinearGraphJacobianEntry) {
  auto d = make_domain({"linear:0.7", "flat"}, {2, 1}, 0.5);
  d.require_normalized = false;
  auto T = build_transform(d);
  double y[3] = {0.11, -0.2, 0.33};
  Eigen::MatrixXd A = T.jacobian(y);
  EXPECT_DOUBLE_EQ(A(2, 0), -0.7);
  EXPECT_DOUBLE_EQ(T.graph_laplacian(0, y), 0.0);
  double xi[1] = {2.0};
  EXPECT_DOUBLE_EQ(T.B(0, y, xi).imag(), 0.0);
}

TEST(Geometry, LinearGraphRejectedWhenNormalized) {
  EXPECT_THROW(build_transform(make_domain({"linear:0.7", "flat"}, {2, 1}, 0.5)), GeometryError);
}

TEST(Geometry, MetricEqualsJacobianProduct) {
  for (auto preset : {"paraboloid:1.3", "quartic:2", "disk:1"}) {
    auto T = build_transform(make_domain({preset, preset}, {3, 2}, 0.4));
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(-0.2, 0.2);
    for (int s = 0; s < 50; ++s) {
      double y[5];
      for (double& v : y) v = U(rng);
      Eigen::MatrixXd g = T.metric(y), g2 = T.metric_from_operator(y);
      EXPECT_LT((g - g2).cwiseAbs().maxCoeff(), 1e-12) << preset;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
      EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
    }
  }
}

TEST(Geometry, InconsistentDerivativesRejected) {
  auto d = paraboloid_domain();
  d.factors[0].graph.gradient = [](const double* t, double* out) { out[0] = 2 * t[0]; };
  EXPECT_THROW(validate(d), GeometryError);
}

TEST(Geometry, RoundTripAndBasePoint) {
  auto d = make_domain({"paraboloid:1", "quartic:1"}, {2, 3}, 0.5);
  d.base_point = {0.3, -0.1, 0.2, 0.0, 0.5};
  validate(d);
  auto y0 = to_model_coordinates(d, d.base_point);
  for (double v : y0) EXPECT_EQ(v, 0.0);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(-0.25, 0.25);
  for (int s = 0; s < 1000; ++s) {
    std::vector<double> x = d.base_point;
    for (double& v : x) v += U(rng);
    auto back = from_model_coordinates(d, to_model_coordinates(d, x));
    for (int k = 0; k < 5; ++k) EXPECT_NEAR(back[k], x[k], 1e-12);
  }
}

TEST(Geometry, FlatIsTranslation) {
  auto d = make_domain({"flat", "flat"}, {1, 1}, 0.5);
  d.base_point = {0.25, -0.5};
  auto y = to_model_coordinates(d, {0.3, -0.4});
  EXPECT_NEAR(y[0], 0.05, 1e-15);
  EXPECT_NEAR(y[1], 0.1, 1e-15);
}

TEST(Geometry, OutsideChartThrows) {
  auto d = paraboloid_domain();
  EXPECT_THROW(to_model_coordinates(d, {0.6, 0.0, 0.0}), ChartError);
}

TEST(Geometry, BoundaryMapsToCoordinatePlane) {
  auto d = make_domain({"disk:1", "paraboloid:2"}, {2, 2}, 0.5);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(-0.2, 0.2);
  for (int s = 0; s < 100; ++s) {
    double t1 = U(rng), t2 = U(rng), x2 = std::abs(U(rng));
    // boundary piece of factor 1: x1 = phi_1(t1)
    std::vector<double> x{1.0 - std::sqrt(1 - t1 * t1), x2, t1, t2};
    auto y = to_model_coordinates(d, x);
    EXPECT_NEAR(y[0], 0.0, 1e-12);
    // interior point maps to y1 > 0
    x[0] += 0.05;
    EXPECT_GT(to_model_coordinates(d, x)[0], 0.0);
  }
}

TEST(Geometry, CutoffProperties) {
  SpatialCutoff c{0.5};
  EXPECT_EQ(c(0.0), 1.0);
  EXPECT_EQ(c(0.25 * 0.25), 1.0);
  EXPECT_EQ(c(0.25), 0.0);
  double prev = 1.0;
  for (int k = 0; k <= 100; ++k) {
    double r = 0.25 + 0.25 * k / 100.0;
    double v = c(r * r);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, prev + 1e-15);
    prev = v;
  }
  // series matches finite differences of the profile
  double r2 = 0.14, h = 1e-5;
  Series s = c.series(r2, 3);
  EXPECT_NEAR(s[0], c(r2), 1e-15);
  EXPECT_NEAR(s[1], (c(r2 + h) - c(r2 - h)) / (2 * h), 1e-6);
}
