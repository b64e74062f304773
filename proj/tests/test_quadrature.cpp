#include <gtest/gtest.h>

#include <cmath>

#include "phasebell/errors.hpp"
#include "phasebell/quadrature.hpp"

namespace pq = phasebell::quad;

TEST(GaussHermite, IntegratesEvenMomentsExactly) {
  const pq::Rule& gh = pq::gauss_hermite(20);
  // int x^{2k} e^{-x^2} dx = Gamma(k + 1/2)
  for (int k = 0; k < 20; ++k) {
    const double exact = std::tgamma(k + 0.5);
    const double got = gh.integrate([k](double x) { return std::pow(x, 2 * k); });
    // Golub-Welsch weights carry ~1e-15 relative error, amplified by the
    // outermost nodes in the highest moments.
    EXPECT_NEAR(got / exact, 1.0, k < 10 ? 1e-13 : 1e-10) << "k=" << k;
  }
}

TEST(GaussHermite, NodesAreSymmetric) {
  const pq::Rule& gh = pq::gauss_hermite(31);
  for (std::size_t i = 0; i < gh.size(); ++i) {
    EXPECT_EQ(gh.nodes[i], -gh.nodes[gh.size() - 1 - i]);
    EXPECT_EQ(gh.weights[i], gh.weights[gh.size() - 1 - i]);
  }
  EXPECT_NEAR(gh.integrate([](double x) { return x * x * x; }), 0.0, 1e-15);
}

TEST(GaussLegendre, PolynomialExactness) {
  const pq::Rule& gl = pq::gauss_legendre(8);
  for (int k = 0; k < 16; ++k) {
    const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
    EXPECT_NEAR(gl.integrate([k](double x) { return std::pow(x, k); }), exact, 1e-14);
  }
}

TEST(GaussLegendre, RejectsBadOrder) { EXPECT_THROW(pq::gauss_legendre(0), phasebell::DomainError); }

TEST(StandardNormal, Moments) {
  const pq::Rule r = pq::standard_normal(40);
  EXPECT_NEAR(r.integrate([](double) { return 1.0; }), 1.0, 1e-14);
  EXPECT_NEAR(r.integrate([](double y) { return y * y; }), 1.0, 1e-13);
  EXPECT_NEAR(r.integrate([](double y) { return std::pow(y, 4); }), 3.0, 1e-12);
}

TEST(StandardNormal, SplitRuleHandlesJumps) {
  const pq::SplitOptions opts;
  for (double s : {-1.3, 0.0, 0.4, 2.5}) {
    const pq::Rule r = pq::standard_normal_split(s, opts);
    const double upper = r.integrate([s](double y) { return y > s ? 1.0 : 0.0; });
    EXPECT_NEAR(upper, 0.5 * std::erfc(s / std::sqrt(2.0)), 1e-12) << "split " << s;
    EXPECT_NEAR(r.integrate([](double) { return 1.0; }), 1.0, 1e-12);
  }
}

TEST(GradedInterval, IntegratesSmoothFunction) {
  const pq::Rule r = pq::graded_interval(0.0, 3.0, 16, 8);
  EXPECT_NEAR(r.integrate([](double x) { return std::exp(-x); }), 1.0 - std::exp(-3.0), 1e-14);
  const pq::Rule back = pq::graded_interval(0.0, -3.0, 16, 8);
  EXPECT_NEAR(back.integrate([](double x) { return x * x; }), 9.0, 1e-12);
}
