#pragma once

#include <Eigen/Dense>

#include <optional>

namespace phasebell {

/// Point of two-mode phase space, hbar = 1. Vector views use the ordering
/// (q1, q2, p1, p2) throughout the library.
struct PhasePoint {
  double q1 = 0.0;
  double q2 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;

  Eigen::Vector4d vec() const { return {q1, q2, p1, p2}; }
  static PhasePoint from(const Eigen::Vector4d& v) { return {v(0), v(1), v(2), v(3)}; }
};

inline constexpr int kQ1 = 0;
inline constexpr int kQ2 = 1;
inline constexpr int kP1 = 2;
inline constexpr int kP2 = 3;

/// Linear canonical map of one mode: q -> a q + b p, p -> c q + d p, ad - bc = 1.
class SymplecticMap {
 public:
  static constexpr double kDeterminantTolerance = 1e-12;

  SymplecticMap(double a, double b, double c, double d);

  static SymplecticMap identity() { return {1.0, 0.0, 0.0, 1.0}; }
  /// Oscillator flow for time t (unit frequency and mass).
  static SymplecticMap harmonic(double t);
  /// Free-particle flow for time t (unit mass).
  static SymplecticMap free(double t);

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }

  Eigen::Matrix2d matrix() const;
  SymplecticMap inverse() const { return {d_, -b_, -c_, a_}; }
  /// `next` applied after this map.
  SymplecticMap then(const SymplecticMap& next) const;

 private:
  double a_, b_, c_, d_;
};

struct TwoModeMap {
  SymplecticMap channel1 = SymplecticMap::identity();
  SymplecticMap channel2 = SymplecticMap::identity();

  static TwoModeMap identity() { return {}; }
  static TwoModeMap harmonic(double t1, double t2) {
    return {SymplecticMap::harmonic(t1), SymplecticMap::harmonic(t2)};
  }
  static TwoModeMap free(double t1, double t2) {
    return {SymplecticMap::free(t1), SymplecticMap::free(t2)};
  }

  TwoModeMap then(const TwoModeMap& next) const {
    return {channel1.then(next.channel1), channel2.then(next.channel2)};
  }
  /// 4x4 matrix acting on (q1, q2, p1, p2).
  Eigen::Matrix4d matrix() const;
};

/// Squeezing strength, carried as tau = tanh(2 zeta) so the EPR limit
/// tau -> 1 stays representable after cosh(2 zeta) would overflow.
class Squeezing {
 public:
  static Squeezing from_zeta(double zeta);
  static Squeezing from_tau(double tau);

  double tau() const { return tau_; }
  std::optional<double> zeta() const { return zeta_; }
  double cosh2z() const;
  double sinh2z() const;

 private:
  Squeezing(double tau, std::optional<double> zeta) : tau_(tau), zeta_(zeta) {}
  double tau_;
  std::optional<double> zeta_;
};

/// Sign of the q1q2 / p1p2 cross terms of the squeezed-vacuum Wigner function.
/// EprCorrelated gives positive q1-q2 correlation for zeta > 0, consistent
/// with the Fock expansion sum_n tanh^n(zeta)|nn> / cosh(zeta).
enum class SignConvention { EprCorrelated, Flipped };

/// Zero-mean Gaussian Wigner function W(x) = norm * exp(-x^T M x).
class GaussianState {
 public:
  static constexpr double kPureNorm = 1.0 / (M_PI * M_PI);

  explicit GaussianState(const Eigen::Matrix4d& form, double norm = kPureNorm,
                         std::optional<double> zeta = std::nullopt);

  const Eigen::Matrix4d& form() const { return form_; }
  double norm() const { return norm_; }
  std::optional<double> zeta() const { return zeta_; }

  /// Covariance of x under W read as a probability density: M^{-1} / 2.
  Eigen::Matrix4d covariance() const;

 private:
  Eigen::Matrix4d form_;
  double norm_;
  std::optional<double> zeta_;
};

GaussianState tmss_state(double zeta, SignConvention convention = SignConvention::EprCorrelated);
GaussianState tmss_state(const Squeezing& squeeze,
                         SignConvention convention = SignConvention::EprCorrelated);

/// Schrodinger-picture evolution: W'(x) = W(S x) with S the inverse map, so
/// M' = S^T M S.
GaussianState evolve(const GaussianState& state, const TwoModeMap& map);

double wigner_eval(const GaussianState& state, const PhasePoint& x);

struct QQMarginal {
  Eigen::Matrix2d covariance;
  double rho = 0.0;
};

QQMarginal marginal_qq(const GaussianState& state);
/// q1-q2 block of an explicit covariance matrix.
QQMarginal marginal_qq(const Eigen::Matrix4d& covariance);

/// Covariance after evolution, pushed forward as T C T^T. Stays accurate when
/// the evolved form M' is too ill-conditioned to build a GaussianState.
Eigen::Matrix4d evolved_covariance(const GaussianState& state, const TwoModeMap& map);

/// Covariance of the two linear forms (g1 . x, g2 . x).
Eigen::Matrix2d linear_form_covariance(const GaussianState& state, const Eigen::Vector4d& g1,
                                       const Eigen::Vector4d& g2);

/// Tensor-product Gauss-Hermite integral of f(x) W(x) over phase space after
/// whitening by the Cholesky factor of M. `order` nodes per axis.
template <typename F>
double integrate_against(const GaussianState& state, F&& f, int order);

}  // namespace phasebell

#include "phasebell/detail/phase_space_impl.hpp"
