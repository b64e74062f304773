#include "phasebell/fock_oracle.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <fmt/format.h>

#include "phasebell/errors.hpp"
#include "phasebell/quadrature.hpp"

namespace phasebell::fock {
namespace {

constexpr double kPanelWidth = 0.25;
constexpr int kPanelOrder = 16;
constexpr double kTurningMargin = 10.0;

void check_truncation(int N) {
  if (N < 0) throw DomainError("truncation N must be non-negative");
}

void check_zeta(double zeta) {
  if (!std::isfinite(zeta)) throw DomainError("zeta must be finite");
}

// Parity-spin value of level n: -1 for even, +1 for odd.
double spin_z(int n) { return n % 2 == 0 ? -1.0 : 1.0; }

SparseC from_triplets(int dim, const std::vector<Eigen::Triplet<cplx>>& t) {
  SparseC m(dim, dim);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

// phi_0..phi_N at x. The recurrence runs on rescaled values with the scale
// tracked in log form, so neither underflow nor overflow occurs.
void scaled_hermite(double x, int N, Eigen::VectorXd& out) {
  out.resize(N + 1);
  double log_scale = -0.5 * x * x - 0.25 * std::log(M_PI);
  double prev = 0.0;
  double cur = 1.0;
  out(0) = std::exp(log_scale);
  for (int n = 0; n < N; ++n) {
    double next = std::sqrt(2.0 / (n + 1)) * x * cur - std::sqrt(static_cast<double>(n) / (n + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > 1e150) {
      prev *= 1e-150;
      cur *= 1e-150;
      log_scale += 150.0 * std::log(10.0);
    }
    out(n + 1) = cur * std::exp(log_scale);
  }
}

Eigen::MatrixXcd as_dense(const SparseC& m) { return Eigen::MatrixXcd(m); }

}  // namespace

FockAmplitudes tmss_coeffs(double zeta, int N, double accuracy) {
  check_zeta(zeta);
  check_truncation(N);
  FockAmplitudes a;
  a.zeta = zeta;
  a.truncation = N;
  const double t = std::tanh(zeta);
  const double ch = std::cosh(zeta);
  a.coeffs.resize(N + 1);
  double power = 1.0;
  for (int n = 0; n <= N; ++n) {
    a.coeffs[n] = power / ch;
    power *= t;
  }
  // 1 - sum_{n<=N} c_n^2 = sum_{n>N} t^{2n} (1 - t^2) = t^{2(N+1)}; summing
  // the tail analytically avoids cancellation against 1.
  const double t2 = t * t;
  a.norm_deficit = std::pow(t2, N + 1);
  a.tail_bound = a.norm_deficit * ch * ch;
  if (a.tail_bound > accuracy) {
    a.truncation_warning = true;
    a.warning = fmt::format("N={} leaves a norm tail bound of {:.3e} above {:.1e}; need N >= {}", N,
                            a.tail_bound, accuracy, required_truncation(zeta, accuracy));
  }
  return a;
}

int required_truncation(double zeta, double accuracy) {
  check_zeta(zeta);
  if (!(accuracy > 0.0)) throw DomainError("accuracy must be positive");
  const double t2 = std::tanh(zeta) * std::tanh(zeta);
  if (t2 == 0.0) return 0;
  const double ch2 = std::cosh(zeta) * std::cosh(zeta);
  // t2^{N+1} ch2 <= accuracy
  const double need = std::log(accuracy / ch2) / std::log(t2) - 1.0;
  return std::max(0, static_cast<int>(std::ceil(need)));
}

ParityMatrices parity_matrices(int N) {
  check_truncation(N);
  const int dim = N + 1;
  std::vector<Eigen::Triplet<cplx>> x, y, z;
  for (int n = 0; n < dim; ++n) z.emplace_back(n, n, cplx(spin_z(n), 0.0));
  for (int k = 0; 2 * k + 1 < dim; ++k) {
    const int e = 2 * k;
    const int o = 2 * k + 1;
    x.emplace_back(e, o, cplx(1.0, 0.0));
    x.emplace_back(o, e, cplx(1.0, 0.0));
    y.emplace_back(e, o, cplx(0.0, 1.0));
    y.emplace_back(o, e, cplx(0.0, -1.0));
  }
  return {N, from_triplets(dim, x), from_triplets(dim, y), from_triplets(dim, z)};
}

Eigen::MatrixXcd rotated_parity(const ParityMatrices& s, double theta) {
  if (!std::isfinite(theta)) throw DomainError("theta must be finite");
  return as_dense(s.sx) * std::cos(theta) - as_dense(s.sy) * std::sin(theta);
}

Eigen::MatrixXcd rotated_parity_expm(const ParityMatrices& s, double theta) {
  if (!std::isfinite(theta)) throw DomainError("theta must be finite");
  const Eigen::MatrixXcd gen = as_dense(s.sz) * cplx(0.0, 0.5 * theta);
  const Eigen::MatrixXcd u = gen.exp();
  const Eigen::MatrixXcd u_inv = (-gen).exp();
  return u * as_dense(s.sx) * u_inv;
}

cplx schmidt_expectation(const FockAmplitudes& amps, const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const int dim = amps.truncation + 1;
  if (a.rows() != dim || a.cols() != dim || b.rows() != dim || b.cols() != dim) {
    throw ContractViolation("operator dimension does not match the truncation");
  }
  const Eigen::Map<const Eigen::VectorXd> c(amps.coeffs.data(), dim);
  const Eigen::MatrixXd w = c * c.transpose();
  return (a.array() * b.array() * w.cast<cplx>().array()).sum();
}

cplx schmidt_expectation(const FockAmplitudes& amps, const SparseC& a, const SparseC& b) {
  const int dim = amps.truncation + 1;
  if (a.rows() != dim || b.rows() != dim) throw ContractViolation("operator dimension does not match the truncation");
  cplx acc = 0.0;
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseC::InnerIterator it(a, k); it; ++it) {
      const cplx bv = b.coeff(it.row(), it.col());
      if (bv != cplx(0.0)) acc += amps.coeffs[it.row()] * amps.coeffs[it.col()] * it.value() * bv;
    }
  }
  return acc;
}

ParityCorrelators parity_correlator(double zeta, int N) {
  const FockAmplitudes amps = tmss_coeffs(zeta, N);
  const ParityMatrices s = parity_matrices(N);
  return {schmidt_expectation(amps, s.sz, s.sz).real(), schmidt_expectation(amps, s.sx, s.sx).real()};
}

Eigen::Matrix3d spin_correlation_tensor(const FockAmplitudes& amps, const ParityMatrices& s) {
  const SparseC* ops[3] = {&s.sx, &s.sy, &s.sz};
  Eigen::Matrix3d t;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) t(i, j) = schmidt_expectation(amps, *ops[i], *ops[j]).real();
  }
  return t;
}

SpinBellResult spin_bell_max(double zeta, int N, const bell::OptimizerBudget& budget) {
  const FockAmplitudes amps = tmss_coeffs(zeta, N);
  SpinBellResult r;
  r.tensor = spin_correlation_tensor(amps, parity_matrices(N));
  const Eigen::Matrix3d t = r.tensor;
  const double f = std::tanh(2.0 * zeta);
  r.closed_form = 2.0 * std::sqrt(1.0 + f * f);

  // Spin direction (sin phi, 0, cos phi) on each side.
  auto xz = [&t](double a, double b) {
    const Eigen::Vector3d u(std::sin(a), 0.0, std::cos(a));
    const Eigen::Vector3d v(std::sin(b), 0.0, std::cos(b));
    return u.dot(t * v);
  };
  // S_x cos(theta) - S_y sin(theta).
  auto in_plane = [&t](double a, double b) {
    const Eigen::Vector3d u(std::cos(a), -std::sin(a), 0.0);
    const Eigen::Vector3d v(std::cos(b), -std::sin(b), 0.0);
    return u.dot(t * v);
  };
  const bell::SearchBox box{0.0, 2.0 * M_PI, 0.0, 2.0 * M_PI};
  const bell::OptimizedSettings best = bell::optimize_settings(xz, box, budget);
  if (!best.converged) throw NotConverged("spin-parity optimizer ran out of budget", best.value);
  const bell::OptimizedSettings plane = bell::optimize_settings(in_plane, box, budget);
  r.value = best.value;
  r.angles = best.settings;
  r.in_plane_value = plane.value;
  r.in_plane_angles = plane.settings;
  return r;
}

Eigen::VectorXd hermite_functions(double x, int N) {
  check_truncation(N);
  if (!std::isfinite(x)) throw DomainError("x must be finite");
  Eigen::VectorXd out;
  scaled_hermite(x, N, out);
  return out;
}

namespace {

// <n|f_k(q)|m> for several f_k on one shared grid of Hermite-function values.
std::vector<Eigen::MatrixXd> position_matrices(const std::vector<std::function<double(double)>>& fs, int N) {
  check_truncation(N);
  const double reach = std::sqrt(2.0 * N + 1.0) + kTurningMargin;
  const int panels = static_cast<int>(std::ceil(reach / kPanelWidth));
  const quad::Rule& gl = quad::gauss_legendre(kPanelOrder);
  const double half = 0.5 * reach / panels;

  std::vector<double> nodes;
  std::vector<double> weights;
  nodes.reserve(2 * panels * kPanelOrder);
  weights.reserve(2 * panels * kPanelOrder);
  for (int side : {-1, 1}) {
    for (int p = 0; p < panels; ++p) {
      const double mid = side * (2 * p + 1) * half;
      for (std::size_t k = 0; k < gl.size(); ++k) {
        nodes.push_back(mid + half * gl.nodes[k]);
        weights.push_back(half * gl.weights[k]);
      }
    }
  }

  const Eigen::Index count = static_cast<Eigen::Index>(nodes.size());
  Eigen::MatrixXd phi(N + 1, count);
  Eigen::VectorXd column;
  for (Eigen::Index k = 0; k < count; ++k) {
    scaled_hermite(nodes[k], N, column);
    phi.col(k) = column;
  }
  std::vector<Eigen::MatrixXd> out;
  for (const auto& f : fs) {
    Eigen::VectorXd weighted(count);
    for (Eigen::Index k = 0; k < count; ++k) weighted(k) = weights[k] * f(nodes[k]);
    Eigen::MatrixXd m = phi * weighted.asDiagonal() * phi.transpose();
    out.push_back(0.5 * (m + m.transpose()));
  }
  return out;
}

}  // namespace

Eigen::MatrixXd position_function_matrix(const std::function<double(double)>& f, int N) {
  return position_matrices({f}, N).front();
}

PiOperators pi_operators(int N) {
  check_truncation(N);
  PiOperators ops;
  ops.truncation = N;
  const auto mats = position_matrices(
      {[](double q) { return static_cast<double>((q > 0.0) - (q < 0.0)); }, [](double) { return 1.0; }}, N);
  ops.x = mats[0];
  ops.grid_error = (mats[1] - Eigen::MatrixXd::Identity(N + 1, N + 1)).cwiseAbs().maxCoeff();
  // sgn q is odd, so it only couples levels of opposite parity; the same-parity
  // entries are quadrature noise and are set to zero exactly.
  for (int n = 0; n <= N; ++n) {
    for (int m = 0; m <= N; ++m) {
      if ((n + m) % 2 == 0) ops.x(n, m) = 0.0;
    }
  }
  ops.z.resize(N + 1);
  for (int n = 0; n <= N; ++n) ops.z(n) = spin_z(n);
  ops.y.resize(N + 1, N + 1);
  for (int n = 0; n <= N; ++n) {
    for (int m = 0; m <= N; ++m) {
      // -i X P with P = (-1)^N diagonal.
      ops.y(n, m) = cplx(0.0, -1.0) * ops.x(n, m) * (m % 2 == 0 ? 1.0 : -1.0);
    }
  }
  return ops;
}

Eigen::MatrixXcd pi_x_evolved(const PiOperators& ops, double t) {
  if (!std::isfinite(t)) throw DomainError("time must be finite");
  const int dim = ops.truncation + 1;
  Eigen::MatrixXcd out(dim, dim);
  for (int n = 0; n < dim; ++n) {
    for (int m = 0; m < dim; ++m) out(n, m) = std::polar(1.0, t * (ops.z(n) - ops.z(m))) * ops.x(n, m);
  }
  return out;
}

double pi_truncation_residual(const FockAmplitudes& amps, const PiOperators& ops) {
  if (amps.truncation != ops.truncation) throw ContractViolation("truncation mismatch");
  // X o X (entrywise square of sgn q) has unit row sums on the full space, so
  // the pairs with a level above N contribute at most 2 sqrt(deficit).
  return 2.0 * std::sqrt(amps.norm_deficit) + ops.grid_error;
}

Eigen::Matrix2d pi_correlation_tensor(const FockAmplitudes& amps, const PiOperators& ops) {
  if (amps.truncation != ops.truncation) throw ContractViolation("truncation mismatch");
  const Eigen::MatrixXcd x = ops.x.cast<cplx>();
  const Eigen::MatrixXcd* m[2] = {&x, &ops.y};
  Eigen::Matrix2d t;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) t(i, j) = schmidt_expectation(amps, *m[i], *m[j]).real();
  }
  return t;
}

double pi_correlator(const Eigen::Matrix2d& tensor, double t1, double t2) {
  const Eigen::Vector2d u(std::cos(2.0 * t1), -std::sin(2.0 * t1));
  const Eigen::Vector2d v(std::cos(2.0 * t2), -std::sin(2.0 * t2));
  return u.dot(tensor * v);
}

namespace {

void check_residual(double residual, double tolerance) {
  if (residual > tolerance) {
    throw TruncationError(fmt::format("Pi correlator error bound {:.3e} exceeds {:.1e}", residual, tolerance),
                          residual);
  }
}

}  // namespace

bell::BellReport pi_chsh_fock(double zeta, int N, const bell::CHSHSettings& times, double tolerance) {
  const FockAmplitudes amps = tmss_coeffs(zeta, N);
  const PiOperators ops = pi_operators(N);
  check_residual(pi_truncation_residual(amps, ops), tolerance);
  const Eigen::Matrix2d t = pi_correlation_tensor(amps, ops);
  return bell::chsh([&t](double a, double b) { return pi_correlator(t, a, b); }, times);
}

PiChshOptimum pi_chsh_optimum(const FockAmplitudes& amps, const PiOperators& ops,
                              const bell::OptimizerBudget& budget, double tolerance) {
  PiChshOptimum r;
  r.truncation_residual = pi_truncation_residual(amps, ops);
  check_residual(r.truncation_residual, tolerance);
  const Eigen::Matrix2d t = pi_correlation_tensor(amps, ops);
  // Pi_x(t) has period pi in t.
  const bell::OptimizedSettings best = bell::optimize_settings(
      [&t](double a, double b) { return pi_correlator(t, a, b); }, {0.0, M_PI, 0.0, M_PI}, budget);
  r.value = best.value;
  r.times = best.settings;
  r.converged = best.converged;
  r.closed_form = pi_chsh_closed_form(amps.zeta);
  return r;
}

PiChshOptimum pi_chsh_optimum(double zeta, int N, const bell::OptimizerBudget& budget, double tolerance) {
  return pi_chsh_optimum(tmss_coeffs(zeta, N), pi_operators(N), budget, tolerance);
}

double pi_chsh_closed_form(double zeta) {
  check_zeta(zeta);
  return bell::kCirelson * (2.0 / M_PI) * std::atan(std::sinh(2.0 * zeta));
}

double overlap_series(double zeta, int N) {
  const FockAmplitudes plus = tmss_coeffs(zeta, N);
  const FockAmplitudes minus = tmss_coeffs(-zeta, N);
  double acc = 0.0;
  for (int n = 0; n <= N; ++n) acc += plus.coeffs[n] * minus.coeffs[n];
  return acc;
}

}  // namespace phasebell::fock
