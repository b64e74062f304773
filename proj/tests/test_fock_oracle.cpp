#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "phasebell/errors.hpp"
#include "phasebell/fock_oracle.hpp"

using namespace phasebell;
using namespace phasebell::fock;

namespace {

Eigen::MatrixXcd dense(const SparseC& m) { return Eigen::MatrixXcd(m); }

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(TmssCoeffs, VacuumAndTail) {
  const auto vac = tmss_coeffs(0.0, 10);
  EXPECT_EQ(vac.coeffs[0], 1.0);
  for (int n = 1; n <= 10; ++n) EXPECT_EQ(vac.coeffs[n], 0.0);

  const auto a = tmss_coeffs(0.5, 100);
  EXPECT_LT(a.norm_deficit, 1e-60);
  EXPECT_LE(a.norm_deficit, a.tail_bound);
  EXPECT_FALSE(a.truncation_warning);

  const auto b = tmss_coeffs(2.0, 400);
  EXPECT_LT(b.norm_deficit, 1e-12);
  double sum = 0.0;
  for (double c : b.coeffs) sum += c * c;
  EXPECT_LE(sum, 1.0 + 1e-15);
  EXPECT_NEAR(1.0 - sum, b.norm_deficit, 1e-14);
}

TEST(TmssCoeffs, WarningChannel) {
  const auto a = tmss_coeffs(2.0, 20);
  EXPECT_TRUE(a.truncation_warning);
  EXPECT_FALSE(a.warning.empty());
  EXPECT_THROW(tmss_coeffs(0.5, -1), DomainError);
  const int n = required_truncation(2.0, 1e-12);
  EXPECT_LE(tmss_coeffs(2.0, n).tail_bound, 1e-12);
  EXPECT_GT(tmss_coeffs(2.0, n - 1).tail_bound, 1e-12);
}

TEST(ParityMatrices, HermitianInvolutionsAndAlgebra) {
  const int n = 41;  // even dimension block plus an unpaired top level when N is even
  for (int big_n : {n, n + 1}) {
    const auto s = parity_matrices(big_n);
    const Eigen::MatrixXcd x = dense(s.sx), y = dense(s.sy), z = dense(s.sz);
    for (const auto* m : {&x, &y, &z}) EXPECT_EQ(max_abs(*m - m->adjoint()), 0.0);
    const int interior = big_n % 2 ? big_n + 1 : big_n;  // paired levels
    const auto id = Eigen::MatrixXcd::Identity(interior, interior);
    const fock::cplx two_i(0.0, 2.0);
    auto block = [interior](const Eigen::MatrixXcd& m) { return m.topLeftCorner(interior, interior).eval(); };
    EXPECT_EQ(max_abs(block(x * x) - id), 0.0);
    EXPECT_EQ(max_abs(block(y * y) - id), 0.0);
    EXPECT_EQ(max_abs(z * z - Eigen::MatrixXcd::Identity(big_n + 1, big_n + 1)), 0.0);
    EXPECT_EQ(max_abs(block(x * y - y * x) - two_i * block(z)), 0.0);
    EXPECT_EQ(max_abs(block(y * z - z * y) - two_i * block(x)), 0.0);
    EXPECT_EQ(max_abs(block(z * x - x * z) - two_i * block(y)), 0.0);
  }
}

TEST(ParityCorrelator, FLaw) {
  const auto vac = parity_correlator(0.0, 50);
  EXPECT_EQ(vac.sx_sx, 0.0);
  EXPECT_EQ(vac.sz_sz, 1.0);
  EXPECT_NEAR(parity_correlator(0.5, 200).sx_sx, std::tanh(1.0), 1e-10);
  EXPECT_NEAR(parity_correlator(1.0, 200).sx_sx, std::tanh(2.0), 1e-10);
  EXPECT_NEAR(parity_correlator(1.0, 200).sz_sz, 1.0, 1e-12);
}

TEST(ParityCorrelator, ConvergesWithTruncation) {
  const double zeta = 1.0;
  for (int n : {50, 100, 200}) {
    const auto amps = tmss_coeffs(zeta, n);
    const double err = std::abs(parity_correlator(zeta, n).sx_sx - std::tanh(2 * zeta));
    EXPECT_LE(err, amps.tail_bound + 1e-14) << "N=" << n;
  }
}

TEST(RotatedParity, ClosedFormMatchesExponential) {
  const auto s = parity_matrices(60);
  for (double th : {0.0, 0.3, M_PI / 2, 2.0, M_PI, -1.1}) {
    EXPECT_LE(max_abs(rotated_parity(s, th) - rotated_parity_expm(s, th)), 1e-10) << th;
  }
  EXPECT_LE(max_abs(rotated_parity(s, 0.0) - dense(s.sx)), 0.0);
  EXPECT_LE(max_abs(rotated_parity(s, M_PI) + dense(s.sx)), 1e-15);
  EXPECT_LE(max_abs(rotated_parity_expm(s, M_PI / 2) + dense(s.sy)), 1e-10);
}

TEST(SpinTensor, ClosedForm) {
  const auto amps = tmss_coeffs(0.5, 200);
  const auto t = spin_correlation_tensor(amps, parity_matrices(200));
  EXPECT_NEAR(t(0, 0), std::tanh(1.0), 1e-12);
  EXPECT_NEAR(t(1, 1), -std::tanh(1.0), 1e-12);
  EXPECT_NEAR(t(2, 2), 1.0, 1e-12);
  EXPECT_NEAR(t(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(t(0, 2), 0.0, 1e-15);
}

TEST(SpinTensor, EvolvedMatricesAgreeWithTensor) {
  const int n = 40;
  const auto amps = tmss_coeffs(0.4, n);
  const auto s = parity_matrices(n);
  const auto t = spin_correlation_tensor(amps, s);
  for (auto [a, b] : {std::pair{0.3, 1.2}, {2.0, -0.7}}) {
    const auto direct = schmidt_expectation(amps, rotated_parity(s, a), rotated_parity(s, b)).real();
    const Eigen::Vector3d u(std::cos(a), -std::sin(a), 0), v(std::cos(b), -std::sin(b), 0);
    EXPECT_NEAR(direct, u.dot(t * v), 1e-13);
  }
}

TEST(SpinBellMax, MatchesClosedForm) {
  const auto start = std::chrono::steady_clock::now();
  double previous = 0.0;
  for (double z : {0.0, 0.25, 0.5, 1.0, 2.0}) {
    const auto r = spin_bell_max(z, 200);
    EXPECT_NEAR(r.value, 2.0 * std::sqrt(1.0 + std::pow(std::tanh(2 * z), 2)), 1e-4) << z;
    EXPECT_LE(r.value, 2.0 * M_SQRT2 + 1e-9);
    EXPECT_GE(r.value, previous - 1e-9);
    EXPECT_NEAR(r.in_plane_value, 2.0 * M_SQRT2 * std::tanh(2 * z), 1e-4);
    previous = r.value;
  }
  EXPECT_NEAR(spin_bell_max(0.5, 200).value, 2.5139814306282964, 1e-6);
  const auto large = spin_bell_max(5.0, required_truncation(5.0, 1e-8));
  EXPECT_NEAR(large.value, 2.0 * M_SQRT2, 1e-3);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(secs, 30.0);
}

TEST(HermiteFunctions, OrthonormalityAndStability) {
  const auto one = position_function_matrix([](double) { return 1.0; }, 120);
  EXPECT_LT((one - Eigen::MatrixXd::Identity(121, 121)).cwiseAbs().maxCoeff(), 1e-12);
  const auto far = hermite_functions(45.0, 1200);
  EXPECT_TRUE(far.allFinite());
  EXPECT_GT(std::abs(far(1200)), 0.0);
  EXPECT_NEAR(hermite_functions(0.0, 0)(0), std::pow(M_PI, -0.25), 1e-15);
}

TEST(PiOperators, SelectionRuleAndKnownElement) {
  const auto ops = pi_operators(60);
  const auto raw = position_function_matrix([](double q) { return (q > 0) - (q < 0); }, 60);
  for (int n = 0; n <= 60; ++n) {
    for (int m = 0; m <= 60; ++m) {
      if ((n + m) % 2 == 0) EXPECT_LT(std::abs(raw(n, m)), 1e-12);
    }
  }
  // <0|sgn q|1> = 2 int_0^inf phi_0 phi_1 = sqrt(2 / pi).
  EXPECT_NEAR(ops.x(0, 1), std::sqrt(2.0 / M_PI), 1e-13);
  EXPECT_LT((ops.y - ops.y.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PiOperators, EvolutionClosedForm) {
  const int n = 30;
  const auto ops = pi_operators(n);
  for (double t : {0.0, 0.4, 1.3}) {
    const Eigen::MatrixXcd expect = ops.x.cast<fock::cplx>() * std::cos(2 * t) - ops.y * std::sin(2 * t);
    EXPECT_LT((pi_x_evolved(ops, t) - expect).cwiseAbs().maxCoeff(), 1e-14);
  }
  // [Pi_z, Pi_x] = 2 i Pi_y.
  const Eigen::MatrixXcd z = ops.z.cast<fock::cplx>().asDiagonal();
  const Eigen::MatrixXcd x = ops.x.cast<fock::cplx>();
  EXPECT_LT((z * x - x * z - fock::cplx(0, 2) * ops.y).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(PiChsh, TensorMatchesEvolvedMatrices) {
  const int n = 60;
  const auto amps = tmss_coeffs(0.5, n);
  const auto ops = pi_operators(n);
  const auto t = pi_correlation_tensor(amps, ops);
  EXPECT_NEAR(t(0, 0), -t(1, 1), 1e-14);
  for (auto [a, b] : {std::pair{0.1, 0.2}, {1.0, 2.5}}) {
    const double direct = schmidt_expectation(amps, pi_x_evolved(ops, a), pi_x_evolved(ops, b)).real();
    EXPECT_NEAR(direct, pi_correlator(t, a, b), 1e-13);
    EXPECT_NEAR(direct, t(0, 0) * std::cos(2 * (a + b)), 1e-13);
  }
}

TEST(PiChsh, OptimumMatchesClosedForm) {
  EXPECT_NEAR(pi_chsh_closed_form(0.5), 1.558932783583142, 1e-12);
  for (auto [z, n] : {std::pair{0.5, 200}, {1.0, 200}, {2.0, 400}}) {
    const auto r = pi_chsh_optimum(z, n);
    EXPECT_NEAR(r.value, r.closed_form, 5e-3) << z;
    EXPECT_LE(r.value, 2.0 * M_SQRT2 + 1e-9);
    EXPECT_TRUE(r.converged);
    const auto report = pi_chsh_fock(z, n, r.times);
    EXPECT_NEAR(std::abs(report.chsh_value), r.value, 1e-12);
  }
  // Vacuum: Pi correlations vanish, the optimum cannot exceed 2.
  EXPECT_LE(pi_chsh_optimum(0.0, 50).value, 2.0);
}

TEST(PiChsh, CoarseTruncationIsRejected) {
  try {
    pi_chsh_optimum(2.0, 20);
    FAIL() << "expected TruncationError";
  } catch (const TruncationError& e) {
    EXPECT_GT(e.residual(), kPiResidualTolerance);
  }
}

TEST(Overlap, SeriesMatchesClosedForm) {
  for (double z : {0.0, 0.3, 0.5, 1.5}) EXPECT_NEAR(overlap_series(z, 400), 1.0 / std::cosh(2 * z), 1e-14);
}
