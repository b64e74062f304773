#pragma once

#include <Eigen/Cholesky>

#include "phasebell/errors.hpp"
#include "phasebell/quadrature.hpp"

namespace phasebell {

template <typename F>
double integrate_against(const GaussianState& state, F&& f, int order) {
  // x^T M x = |y|^2 with y = L^T x, so x = L^{-T} y and dx = dy / det L.
  Eigen::LLT<Eigen::Matrix4d> llt(state.form());
  if (llt.info() != Eigen::Success) throw ContractViolation("quadratic form is not positive definite");
  const Eigen::Matrix4d lower = llt.matrixL();
  const Eigen::Matrix4d to_x = lower.transpose().inverse();
  const double jac = 1.0 / lower.diagonal().prod();

  const quad::Rule& gh = quad::gauss_hermite(order);
  const std::size_t n = gh.size();
  double acc = 0.0;
  Eigen::Vector4d y;
  for (std::size_t i = 0; i < n; ++i) {
    y(0) = gh.nodes[i];
    for (std::size_t j = 0; j < n; ++j) {
      y(1) = gh.nodes[j];
      const double wij = gh.weights[i] * gh.weights[j];
      for (std::size_t k = 0; k < n; ++k) {
        y(2) = gh.nodes[k];
        const double wijk = wij * gh.weights[k];
        for (std::size_t l = 0; l < n; ++l) {
          y(3) = gh.nodes[l];
          acc += wijk * gh.weights[l] * f(PhasePoint::from(to_x * y));
        }
      }
    }
  }
  return state.norm() * jac * acc;
}

}  // namespace phasebell
