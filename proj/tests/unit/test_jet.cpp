#include <gtest/gtest.h>

#include <cmath>

#include "cornex/jet.hpp"

using namespace cornex;

TEST(Series, ExpLogRoundTrip) {
  Series x = Series::variable(8, 0.7);
  Series y = log(exp(x));
  for (int k = 0; k <= 8; ++k) EXPECT_NEAR(y[k], x[k], 1e-13);
}

TEST(Series, SinCoefficients) {
  Series s = sin(Series::variable(6, 0.0));
  EXPECT_NEAR(s[1], 1.0, 1e-15);
  EXPECT_NEAR(s[3], -1.0 / 6, 1e-15);
  EXPECT_NEAR(s[5], 1.0 / 120, 1e-15);
}

TEST(Jet, MixedDerivativesOfProductExponential) {
  std::vector<int> ord{4, 3};
  Jet x = Jet::variable(ord, 0, 0.3);
  Jet y = Jet::variable(ord, 1, -0.2);
  Jet f = exp(x * y);
  // d^a/dx^a d^b/dy^b e^{xy} at (x0, y0), checked against finite closed forms.
  double e = std::exp(0.3 * -0.2);
  EXPECT_NEAR(f.derivative({0, 0}), e, 1e-14);
  EXPECT_NEAR(f.derivative({1, 0}), -0.2 * e, 1e-14);
  EXPECT_NEAR(f.derivative({2, 0}), 0.04 * e, 1e-14);
  // d2/dxdy e^{xy} = (1 + xy) e^{xy}
  EXPECT_NEAR(f.derivative({1, 1}), (1 + 0.3 * -0.2) * e, 1e-14);
  // d^4/dx^4 = y^4 e^{xy}
  EXPECT_NEAR(f.derivative({4, 0}), std::pow(0.2, 4) * e, 1e-14);
}

TEST(Jet, DivisionAndSqrt) {
  std::vector<int> ord{5};
  Jet x = Jet::variable(ord, 0, 2.0);
  Jet f = sqrt(x) / (x + 1.0);
  Jet g = f * (x + 1.0);
  Jet s = sqrt(x);
  for (int k = 0; k <= 5; ++k) EXPECT_NEAR(g.coefficient({k}), s.coefficient({k}), 1e-14);
  // d/dx sqrt(x) = 1/(2 sqrt x)
  EXPECT_NEAR(s.derivative({1}), 0.5 / std::sqrt(2.0), 1e-15);
}

TEST(Jet, TruncationRespectsPerAxisOrders) {
  std::vector<int> ord{2, 0};
  Jet x = Jet::variable(ord, 0, 0.0);
  Jet y = Jet::variable(ord, 1, 1.0);
  Jet f = x * x * x + x * y;
  EXPECT_EQ(f.coefficient({3, 0}), 0.0);
  EXPECT_NEAR(f.coefficient({1, 0}), 1.0, 1e-15);
}
