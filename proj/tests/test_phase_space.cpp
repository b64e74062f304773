#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "phasebell/errors.hpp"
#include "phasebell/phase_space.hpp"

using namespace phasebell;

namespace {

// Exponent matrix of the oscillator-evolved squeezed vacuum, theta = t1 + t2.
Eigen::Matrix4d expected_harmonic_form(double zeta, double t1, double t2) {
  const double c = std::cosh(2 * zeta), s = std::sinh(2 * zeta), th = t1 + t2;
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity() * c;
  m(kQ1, kQ2) = m(kQ2, kQ1) = -s * std::cos(th);
  m(kP1, kP2) = m(kP2, kP1) = s * std::cos(th);
  m(kQ1, kP2) = m(kP2, kQ1) = s * std::sin(th);
  m(kQ2, kP1) = m(kP1, kQ2) = s * std::sin(th);
  return m;
}

// Exponent matrix of the freely evolved squeezed vacuum.
Eigen::Matrix4d expected_free_form(double zeta, double t1, double t2) {
  const double c = std::cosh(2 * zeta), s = std::sinh(2 * zeta);
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(kQ1, kQ1) = c;
  m(kQ2, kQ2) = c;
  m(kP1, kP1) = c * (1 + t1 * t1);
  m(kP2, kP2) = c * (1 + t2 * t2);
  m(kQ1, kP1) = m(kP1, kQ1) = -c * t1;
  m(kQ2, kP2) = m(kP2, kQ2) = -c * t2;
  m(kQ1, kQ2) = m(kQ2, kQ1) = -s;
  m(kQ1, kP2) = m(kP2, kQ1) = s * t2;
  m(kP1, kQ2) = m(kQ2, kP1) = s * t1;
  m(kP1, kP2) = m(kP2, kP1) = s * (1 - t1 * t2);
  return m;
}

SymplecticMap random_map(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double a = u(rng), b = u(rng), c = u(rng);
  if (std::abs(a) < 0.1) a = 0.1 + std::abs(a);
  return {a, b, c, (1.0 + b * c) / a};
}

}  // namespace

TEST(SymplecticMap, RejectsNonCanonical) {
  EXPECT_THROW(SymplecticMap(1.0, 1.0, 1.0, 1.0), ContractViolation);
  EXPECT_THROW(SymplecticMap(NAN, 0.0, 0.0, 1.0), DomainError);
  EXPECT_NO_THROW(SymplecticMap(2.0, 0.0, 0.0, 0.5));
}

TEST(SymplecticMap, FlowsAreCanonical) {
  for (double t : {-3.0, -0.5, 0.0, 0.7, 10.0, 1000.0}) {
    const auto h = SymplecticMap::harmonic(t);
    const auto f = SymplecticMap::free(t);
    EXPECT_NEAR(h.matrix().determinant(), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(f.matrix().determinant(), 1.0);
  }
  const auto h = SymplecticMap::harmonic(M_PI / 2);
  EXPECT_NEAR(h.a(), 0.0, 1e-16);
  EXPECT_EQ(h.b(), 1.0);
  EXPECT_EQ(h.c(), -1.0);
}

TEST(SymplecticMap, CompositionLaw) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const auto m1 = random_map(rng);
    const auto m2 = random_map(rng);
    const auto both = m1.then(m2);
    EXPECT_NEAR((both.matrix() - m2.matrix() * m1.matrix()).cwiseAbs().maxCoeff(), 0.0, 1e-12);
    EXPECT_NEAR(both.matrix().determinant(), 1.0, 1e-12);
    const auto id = m1.then(m1.inverse());
    EXPECT_NEAR((id.matrix() - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 0.0, 1e-12);
  }
  // Oscillator flows form a one-parameter group.
  const auto h = SymplecticMap::harmonic(0.3).then(SymplecticMap::harmonic(0.9));
  EXPECT_NEAR((h.matrix() - SymplecticMap::harmonic(1.2).matrix()).norm(), 0.0, 1e-15);
}

TEST(Squeezing, TauAndZetaAgree) {
  const auto a = Squeezing::from_zeta(0.5);
  const auto b = Squeezing::from_tau(std::tanh(1.0));
  EXPECT_NEAR(a.cosh2z(), b.cosh2z(), 1e-13);
  EXPECT_NEAR(a.sinh2z(), b.sinh2z(), 1e-13);
  EXPECT_THROW(Squeezing::from_tau(1.5), DomainError);
  EXPECT_THROW(Squeezing::from_zeta(INFINITY), DomainError);
  const auto epr = Squeezing::from_tau(1.0 - 1e-12);
  EXPECT_TRUE(std::isfinite(epr.cosh2z()));
  EXPECT_NEAR(epr.cosh2z() * epr.cosh2z() - epr.sinh2z() * epr.sinh2z(), 1.0, 1e-3);
}

TEST(GaussianState, VacuumAndSqueezedForms) {
  const auto vac = tmss_state(0.0);
  EXPECT_NEAR((vac.form() - Eigen::Matrix4d::Identity()).norm(), 0.0, 1e-15);
  EXPECT_NEAR(wigner_eval(vac, {}), 1.0 / (M_PI * M_PI), 1e-15);

  const auto st = tmss_state(0.5);
  EXPECT_NEAR(st.form()(kQ1, kQ2), -std::sinh(1.0), 1e-15);
  EXPECT_NEAR(st.form()(kP1, kP2), std::sinh(1.0), 1e-15);
  EXPECT_NEAR(marginal_qq(st).rho, std::tanh(1.0), 1e-14);

  const auto flipped = tmss_state(0.5, SignConvention::Flipped);
  EXPECT_NEAR(marginal_qq(flipped).rho, -std::tanh(1.0), 1e-14);
}

TEST(GaussianState, Validation) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(0, 1) = 0.5;
  EXPECT_THROW(GaussianState{m}, ContractViolation);  // not symmetric
  EXPECT_THROW(GaussianState{-Eigen::Matrix4d::Identity()}, ContractViolation);
  EXPECT_THROW(GaussianState{2.0 * Eigen::Matrix4d::Identity()}, ContractViolation);  // det != 1
  EXPECT_NO_THROW(GaussianState(2.0 * Eigen::Matrix4d::Identity(), 4.0 / (M_PI * M_PI)));
  EXPECT_THROW(tmss_state(Squeezing::from_tau(1.0)), DomainError);
  EXPECT_THROW(wigner_eval(tmss_state(0.1), {NAN, 0, 0, 0}), DomainError);
}

TEST(GaussianState, Normalization) {
  for (double z : {0.0, 0.3, 1.0}) {
    const auto st = evolve(tmss_state(z), TwoModeMap::free(0.4, -1.1));
    EXPECT_NEAR(integrate_against(st, [](const PhasePoint&) { return 1.0; }, 12), 1.0, 1e-12);
    // Second moments reproduce the covariance M^{-1} / 2.
    const double q1q2 = integrate_against(st, [](const PhasePoint& x) { return x.q1 * x.q2; }, 12);
    EXPECT_NEAR(q1q2, st.covariance()(kQ1, kQ2), 1e-12);
  }
}

TEST(Evolution, HarmonicMatchesClosedForm) {
  for (double z : {0.1, 0.5, 1.3}) {
    for (auto [t1, t2] : {std::pair{0.0, 0.0}, {0.3, 0.2}, {1.0, -2.5}, {M_PI, 0.1}}) {
      const auto st = evolve(tmss_state(z), TwoModeMap::harmonic(t1, t2));
      EXPECT_NEAR((st.form() - expected_harmonic_form(z, t1, t2)).cwiseAbs().maxCoeff(), 0.0, 1e-12);
      EXPECT_NEAR(marginal_qq(st).rho, std::tanh(2 * z) * std::cos(t1 + t2), 1e-12);
    }
  }
}

TEST(Evolution, FreeMatchesClosedForm) {
  for (double z : {0.1, 0.5, 1.3}) {
    for (auto [t1, t2] : {std::pair{0.0, 2.0}, {1.0, 1.0}, {-0.7, 3.1}}) {
      const auto st = evolve(tmss_state(z), TwoModeMap::free(t1, t2));
      EXPECT_NEAR((st.form() - expected_free_form(z, t1, t2)).cwiseAbs().maxCoeff(), 0.0, 1e-12);
      const double alpha = (1 - t1 * t2) / std::sqrt((1 + t1 * t1) * (1 + t2 * t2));
      EXPECT_NEAR(marginal_qq(st).rho, alpha * std::tanh(2 * z), 1e-12);
    }
  }
}

TEST(Evolution, PullbackIdentity) {
  // W'(m(x)) = W(x): the evolved Wigner function is the old one transported.
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  const auto st = tmss_state(0.4);
  for (int i = 0; i < 100; ++i) {
    const TwoModeMap map{random_map(rng), random_map(rng)};
    const auto ev = evolve(st, map);
    const Eigen::Vector4d x(g(rng), g(rng), g(rng), g(rng));
    const Eigen::Vector4d mx = map.matrix() * x;
    EXPECT_NEAR(wigner_eval(ev, PhasePoint::from(mx)), wigner_eval(st, PhasePoint::from(x)), 1e-13);
  }
}

TEST(Evolution, CompositionMatchesSequentialEvolution) {
  std::mt19937_64 rng(3);
  const auto st = tmss_state(0.7);
  for (int i = 0; i < 50; ++i) {
    const TwoModeMap m1{random_map(rng), random_map(rng)};
    const TwoModeMap m2{random_map(rng), random_map(rng)};
    const auto a = evolve(evolve(st, m1), m2);
    const auto b = evolve(st, m1.then(m2));
    EXPECT_NEAR((a.form() - b.form()).cwiseAbs().maxCoeff() / a.form().cwiseAbs().maxCoeff(), 0.0, 1e-11);
  }
}

TEST(Evolution, HarmonicPeriodicity) {
  const auto a = evolve(tmss_state(0.5), TwoModeMap::harmonic(0.3, 0.4));
  const auto b = evolve(tmss_state(0.5), TwoModeMap::harmonic(0.3 + 2 * M_PI, 0.4));
  EXPECT_NEAR((a.form() - b.form()).cwiseAbs().maxCoeff(), 0.0, 1e-12);
}

TEST(LinearForms, CovarianceOfQuadratures) {
  const auto st = tmss_state(0.5);
  Eigen::Vector4d g1 = Eigen::Vector4d::Zero(), g2 = Eigen::Vector4d::Zero();
  g1(kQ1) = 1.0;
  g2(kQ2) = 1.0;
  const Eigen::Matrix2d c = linear_form_covariance(st, g1, g2);
  EXPECT_NEAR(c(0, 0), 0.5 * std::cosh(1.0), 1e-14);
  EXPECT_NEAR(c(0, 1), 0.5 * std::sinh(1.0), 1e-14);
}
