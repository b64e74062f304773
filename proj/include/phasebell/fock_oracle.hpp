#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "phasebell/bell.hpp"

namespace phasebell::fock {

using cplx = std::complex<double>;
using SparseC = Eigen::SparseMatrix<cplx>;

/// Schmidt amplitudes c_n = tanh^n(zeta) / cosh(zeta), n = 0..N, of the
/// squeezed vacuum sum_n c_n |n n>.
struct FockAmplitudes {
  double zeta = 0.0;
  int truncation = 0;
  std::vector<double> coeffs;
  double norm_deficit = 0.0;  // 1 - sum c_n^2
  double tail_bound = 0.0;    // tanh^{2(N+1)} / (1 - tanh^2)
  bool truncation_warning = false;
  std::string warning;
};

/// `accuracy` only drives the warning channel; any N >= 0 is accepted.
FockAmplitudes tmss_coeffs(double zeta, int N, double accuracy = 1e-12);

/// Smallest N whose tail bound is below `accuracy`.
int required_truncation(double zeta, double accuracy);

/// S_z = sum |2n+1><2n+1| - |2n><2n|, S_x and S_y coupling the pairs
/// (2k, 2k+1). A level N without its partner N+1 is left uncoupled.
struct ParityMatrices {
  int truncation = 0;
  SparseC sx, sy, sz;
};

ParityMatrices parity_matrices(int N);

/// S_x cos(theta) - S_y sin(theta).
Eigen::MatrixXcd rotated_parity(const ParityMatrices& s, double theta);
/// exp(i theta S_z / 2) S_x exp(-i theta S_z / 2) by matrix exponentials.
Eigen::MatrixXcd rotated_parity_expm(const ParityMatrices& s, double theta);

/// <A (x) B> = sum_{n,m} c_n c_m A_nm B_nm in the Schmidt basis.
cplx schmidt_expectation(const FockAmplitudes& amps, const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);
cplx schmidt_expectation(const FockAmplitudes& amps, const SparseC& a, const SparseC& b);

struct ParityCorrelators {
  double sz_sz = 0.0;
  double sx_sx = 0.0;
};

ParityCorrelators parity_correlator(double zeta, int N);

/// T_ij = <S_i (x) S_j>, i, j in {x, y, z}.
Eigen::Matrix3d spin_correlation_tensor(const FockAmplitudes& amps, const ParityMatrices& s);

struct SpinBellResult {
  double value = 0.0;        // optimum over settings n = (sin phi, 0, cos phi)
  double closed_form = 0.0;  // 2 sqrt(1 + tanh^2 2 zeta)
  double in_plane_value = 0.0;  // optimum restricted to the S_x-S_y plane
  bell::CHSHSettings angles;
  bell::CHSHSettings in_plane_angles;
  Eigen::Matrix3d tensor;
};

/// Maximal |CHSH| of parity-spin observables. Throws NotConverged with the
/// best value when the optimizer runs out of budget.
SpinBellResult spin_bell_max(double zeta, int N, const bell::OptimizerBudget& budget = {64});

/// <n| f(q) |m> for Hermite functions n, m <= N by composite Gauss-Legendre
/// quadrature with panels split at q = 0, where sgn jumps.
Eigen::MatrixXd position_function_matrix(const std::function<double(double)>& f, int N);

/// Hermite functions phi_0..phi_N at x, stable for large |x| and N.
Eigen::VectorXd hermite_functions(double x, int N);

/// Configurational parity operators: Pi_x = sgn(q), Pi_z = S_z = -(-1)^N,
/// Pi_y = -i Pi_x (-1)^N.
struct PiOperators {
  int truncation = 0;
  Eigen::MatrixXd x;
  Eigen::MatrixXcd y;
  Eigen::VectorXd z;  // diagonal of Pi_z
  double grid_error = 0.0;  // max |<n|m>_grid - delta_nm|
};

PiOperators pi_operators(int N);

/// Pi_x(t) = exp(i t Pi_z) Pi_x exp(-i t Pi_z) = Pi_x cos 2t - Pi_y sin 2t.
Eigen::MatrixXcd pi_x_evolved(const PiOperators& ops, double t);

/// Bound on the error of a Pi correlator: 2 sqrt(norm deficit) for the Fock
/// truncation plus the orthonormality error of the coordinate grid.
double pi_truncation_residual(const FockAmplitudes& amps, const PiOperators& ops);

/// Default accepted truncation residual.
inline constexpr double kPiResidualTolerance = 1e-3;

/// Pi correlation tensor T_ij = <Pi_i (x) Pi_j>, i, j in {x, y}.
Eigen::Matrix2d pi_correlation_tensor(const FockAmplitudes& amps, const PiOperators& ops);

/// E(t1, t2) = <Pi_x(t1) (x) Pi_x(t2)> from the tensor.
double pi_correlator(const Eigen::Matrix2d& tensor, double t1, double t2);

/// CHSH of Pi_x(t) observables at the given times. Throws TruncationError when
/// the residual exceeds `tolerance`.
bell::BellReport pi_chsh_fock(double zeta, int N, const bell::CHSHSettings& times,
                              double tolerance = kPiResidualTolerance);

struct PiChshOptimum {
  double value = 0.0;
  double closed_form = 0.0;  // 2 sqrt 2 (2/pi) arctan(sinh 2 zeta)
  bell::CHSHSettings times;
  bool converged = true;
  double truncation_residual = 0.0;
};

PiChshOptimum pi_chsh_optimum(double zeta, int N, const bell::OptimizerBudget& budget = {64},
                              double tolerance = kPiResidualTolerance);
/// Reuses prebuilt operators, e.g. across a bisection in zeta.
PiChshOptimum pi_chsh_optimum(const FockAmplitudes& amps, const PiOperators& ops,
                              const bell::OptimizerBudget& budget = {64},
                              double tolerance = kPiResidualTolerance);

/// 2 sqrt 2 (2/pi) arctan(sinh 2 zeta).
double pi_chsh_closed_form(double zeta);

/// <zeta|-zeta> = sum_n c_n(zeta) c_n(-zeta).
double overlap_series(double zeta, int N);

}  // namespace phasebell::fock
