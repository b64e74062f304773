#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "phasebell/errors.hpp"
#include "phasebell/observables.hpp"

using namespace phasebell;

namespace {

SymplecticMap random_map(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double a = u(rng), b = u(rng), c = u(rng);
  if (std::abs(a) < 0.1) a = 0.1 + std::abs(a);
  return {a, b, c, (1.0 + b * c) / a};
}

PhasePoint channel_image(const SymplecticMap& m, Channel ch, const PhasePoint& x) {
  PhasePoint y = x;
  if (ch == Channel::One) {
    y.q1 = m.a() * x.q1 + m.b() * x.p1;
    y.p1 = m.c() * x.q1 + m.d() * x.p1;
  } else {
    y.q2 = m.a() * x.q2 + m.b() * x.p2;
    y.p2 = m.c() * x.q2 + m.d() * x.p2;
  }
  return y;
}

}  // namespace

TEST(Classify, CatalogVerdicts) {
  EXPECT_TRUE(classify(SignOfLinear{}).proper);
  EXPECT_TRUE(classify(SignOfLinear{}).bounded);
  EXPECT_TRUE(classify(FunctionOfLinear{}).proper);
  EXPECT_TRUE(classify(FunctionOfLinear{Channel::Two, 0.0, 1.0, LinearFunction::Sign}).proper);
  EXPECT_FALSE(classify(ParityZ{}).proper);
  EXPECT_FALSE(classify(ParityYSingular{}).proper);
  EXPECT_FALSE(classify(QuadraticHO{}).proper);
  EXPECT_NE(classify(ParityZ{}).reason.find("delta"), std::string::npos);
  EXPECT_EQ(classify(QuadraticHO{}).spectrum.kind, SpectrumDescriptor::Kind::HalfIntegerLadder);
}

TEST(WignerRep, PointwiseValues) {
  const PhasePoint x{1.0, -2.0, -0.5, 0.25};
  EXPECT_EQ(std::get<double>(wigner_rep(SignOfLinear{Channel::One, 1.0, 0.0}, x)), 1.0);
  EXPECT_EQ(std::get<double>(wigner_rep(SignOfLinear{Channel::Two, 1.0, 0.0}, x)), -1.0);
  EXPECT_EQ(std::get<double>(wigner_rep(SignOfLinear{Channel::One, 1.0, 4.0}, x)), -1.0);
  EXPECT_NEAR(std::get<double>(wigner_rep(FunctionOfLinear{}, x)), std::tanh(1.0), 1e-15);
  EXPECT_NEAR(std::get<double>(wigner_rep(QuadraticHO{}, x)), 0.625, 1e-15);
  EXPECT_TRUE(std::holds_alternative<Singular>(wigner_rep(ParityZ{}, x)));
  EXPECT_TRUE(std::holds_alternative<Singular>(wigner_rep(ParityYSingular{}, x)));
}

TEST(WignerRep, Errors) {
  EXPECT_THROW(wigner_rep(SignOfLinear{Channel::One, 0.0, 0.0}, {}), ContractViolation);
  EXPECT_THROW(wigner_rep(SignOfLinear{}, {NAN, 0, 0, 0}), DomainError);
  EXPECT_THROW(as_linear(ParityZ{}), UnsupportedObservable);
  EXPECT_THROW(transform_dv(QuadraticHO{}, SymplecticMap::harmonic(0.1)), UnsupportedTransform);
}

TEST(TransformDv, HarmonicQuarterPeriodTurnsQIntoP) {
  const auto dv = transform_dv(SignOfLinear{Channel::One, 1.0, 0.0}, SymplecticMap::harmonic(M_PI / 2));
  const auto& s = std::get<SignOfLinear>(dv);
  EXPECT_NEAR(s.a, 0.0, 1e-15);
  EXPECT_NEAR(s.b, 1.0, 1e-15);
}

TEST(TransformDv, PullbackAndClosureOnRandomMaps) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const SymplecticMap m = random_map(rng);
    const Channel ch = i % 2 ? Channel::One : Channel::Two;
    const DynamicalVariable dvs[] = {
        SignOfLinear{ch, u(rng), u(rng)},
        FunctionOfLinear{ch, u(rng), u(rng), LinearFunction::Tanh},
    };
    const PhasePoint x{g(rng), g(rng), g(rng), g(rng)};
    for (const auto& dv : dvs) {
      const auto moved = transform_dv(dv, m);
      EXPECT_TRUE(classify(moved).proper);
      EXPECT_EQ(channel_of(moved), ch);
      const double lhs = std::get<double>(wigner_rep(moved, x));
      const double rhs = std::get<double>(wigner_rep(dv, channel_image(m, ch, x)));
      EXPECT_NEAR(lhs, rhs, 1e-12);
    }
  }
}

TEST(Nondispersive, ProperVariablesHaveMatchingPowers) {
  const auto st = evolve(tmss_state(0.5), TwoModeMap::harmonic(0.3, 0.1));
  for (int k : {2, 3, 4}) {
    EXPECT_LT(nondispersive_check(SignOfLinear{Channel::One, 1.0, 0.5}, st, k), 1e-12) << k;
    EXPECT_LT(nondispersive_check(FunctionOfLinear{Channel::Two, 0.7, -0.2}, st, k), 1e-12) << k;
  }
  EXPECT_THROW(nondispersive_check(QuadraticHO{}, st, 2), UnsupportedObservable);
  EXPECT_THROW(nondispersive_check(SignOfLinear{}, st, 5), DomainError);
}
