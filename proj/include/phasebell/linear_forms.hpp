#pragma once

#include <Eigen/Dense>

#include "phasebell/phase_space.hpp"
#include "phasebell/quadrature.hpp"

namespace phasebell {

enum class LinearFunction { Sign, Tanh };

/// sgn with sgn(0) = 0; the zero line has measure zero in every integral.
inline double sign_of(double u) { return static_cast<double>((u > 0.0) - (u < 0.0)); }

inline double apply(LinearFunction f, double u) {
  return f == LinearFunction::Sign ? sign_of(u) : std::tanh(u);
}

inline double apply_power(LinearFunction f, double u, int power) {
  const double v = apply(f, u);
  double out = 1.0;
  for (int i = 0; i < power; ++i) out *= v;
  return out;
}

/// f(g . x) for a phase-space covector g.
struct LinearObservable {
  Eigen::Vector4d form;
  LinearFunction f = LinearFunction::Sign;
  int power = 1;

  double operator()(const Eigen::Vector4d& x) const { return apply_power(f, form.dot(x), power); }
  bool has_jump() const { return f == LinearFunction::Sign; }
};

struct QuadratureOptions {
  int gauss_hermite_order = 64;
  quad::SplitOptions split{};
};

/// Phase-space integral of W * A over the whitened coordinates. The whitening
/// is rotated so the argument of A is the first axis; a sign jump then sits on
/// an axis and each side is integrated with graded panels.
double phase_space_expectation(const GaussianState& state, const LinearObservable& a,
                               const QuadratureOptions& opts = {});

/// Phase-space integral of W * A * B. After whitening, g_A . x = r11 y1 and
/// g_B . x = r21 y1 + r22 y2; the inner y2 axis is split at the jump of B for
/// every outer node.
double phase_space_expectation(const GaussianState& state, const LinearObservable& a,
                               const LinearObservable& b, const QuadratureOptions& opts = {});

}  // namespace phasebell
