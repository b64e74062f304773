#include "phasebell/linear_forms.hpp"

#include <Eigen/Cholesky>

#include <cmath>

#include "phasebell/errors.hpp"

namespace phasebell {
namespace {

// Cholesky factor of the covariance: x = L z with z ~ N(0, I).
Eigen::Matrix4d sampling_factor(const GaussianState& state) {
  Eigen::LLT<Eigen::Matrix4d> llt(state.covariance());
  if (llt.info() != Eigen::Success) throw ContractViolation("covariance is not positive definite");
  return llt.matrixL();
}

// Normalization of W read as a density. Pure states are constructed with
// det M = 1; a direct determinant cancels badly near the EPR limit.
double total_weight(const GaussianState& state) {
  if (state.norm() == GaussianState::kPureNorm) return 1.0;
  const Eigen::Vector4d diag = state.form().llt().matrixL().toDenseMatrix().diagonal();
  return state.norm() * M_PI * M_PI / diag.prod();
}

quad::Rule rule_for(const LinearObservable& obs, double split, const QuadratureOptions& opts) {
  if (obs.has_jump()) return quad::standard_normal_split(split, opts.split);
  return quad::standard_normal(opts.gauss_hermite_order);
}

}  // namespace

double phase_space_expectation(const GaussianState& state, const LinearObservable& a,
                               const QuadratureOptions& opts) {
  const Eigen::Matrix4d lower = sampling_factor(state);
  const double r11 = (lower.transpose() * a.form).norm();
  const quad::Rule rule = rule_for(a, 0.0, opts);
  const double acc = rule.integrate([&](double y1) { return apply_power(a.f, r11 * y1, a.power); });
  return total_weight(state) * acc;
}

double phase_space_expectation(const GaussianState& state, const LinearObservable& a,
                               const LinearObservable& b, const QuadratureOptions& opts) {
  const Eigen::Matrix4d lower = sampling_factor(state);
  const Eigen::Vector4d ha = lower.transpose() * a.form;
  const Eigen::Vector4d hb = lower.transpose() * b.form;
  const double r11 = ha.norm();
  if (r11 == 0.0) throw DomainError("linear form of the first observable vanishes");
  const Eigen::Vector4d e1 = ha / r11;
  const double r21 = hb.dot(e1);
  const double r22 = (hb - r21 * e1).norm();

  // When B jumps, the inner integral changes over |y1| ~ r22 / |r21|, which
  // is tiny for nearly degenerate correlations; resolve it explicitly.
  const double feature = std::abs(r21) > 0.0 ? 16.0 * r22 / std::abs(r21) : 0.0;
  const quad::Rule outer = b.has_jump() && feature < 1.0 ? quad::standard_normal_split(0.0, opts.split, feature)
                                                         : rule_for(a, 0.0, opts);
  const quad::Rule smooth_inner = quad::standard_normal(opts.gauss_hermite_order);

  double acc = 0.0;
  for (std::size_t i = 0; i < outer.size(); ++i) {
    const double y1 = outer.nodes[i];
    const double fa = apply_power(a.f, r11 * y1, a.power);
    if (fa == 0.0) continue;
    const double shift = r21 * y1;
    double inner = 0.0;
    if (r22 <= 1e-300) {
      inner = apply_power(b.f, shift, b.power);
    } else if (b.has_jump()) {
      const quad::Rule rule = quad::standard_normal_split(-shift / r22, opts.split);
      inner = rule.integrate([&](double y2) { return apply_power(b.f, shift + r22 * y2, b.power); });
    } else {
      inner = smooth_inner.integrate([&](double y2) { return apply_power(b.f, shift + r22 * y2, b.power); });
    }
    acc += outer.weights[i] * fa * inner;
  }
  return total_weight(state) * acc;
}

}  // namespace phasebell
