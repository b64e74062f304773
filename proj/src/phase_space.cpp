#include "phasebell/phase_space.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <cmath>
#include <string>

#include "phasebell/errors.hpp"

namespace phasebell {
namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

}  // namespace

SymplecticMap::SymplecticMap(double a, double b, double c, double d) : a_(a), b_(b), c_(c), d_(d) {
  require_finite(a, "map coefficient a");
  require_finite(b, "map coefficient b");
  require_finite(c, "map coefficient c");
  require_finite(d, "map coefficient d");
  const double det = a * d - b * c;
  if (std::abs(det - 1.0) > kDeterminantTolerance) {
    throw ContractViolation("symplectic map needs ad - bc = 1, got " + std::to_string(det));
  }
}

SymplecticMap SymplecticMap::harmonic(double t) {
  const double c = std::cos(t);
  const double s = std::sin(t);
  return {c, s, -s, c};
}

SymplecticMap SymplecticMap::free(double t) { return {1.0, t, 0.0, 1.0}; }

Eigen::Matrix2d SymplecticMap::matrix() const {
  Eigen::Matrix2d m;
  m << a_, b_, c_, d_;
  return m;
}

SymplecticMap SymplecticMap::then(const SymplecticMap& next) const {
  const Eigen::Matrix2d m = next.matrix() * matrix();
  // Rounding in the product can push ad - bc off 1 by a few ulps times the
  // entry scale; restore the canonical condition exactly through d.
  double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  if (std::abs(a) >= std::abs(d) && a != 0.0) {
    d = (1.0 + b * c) / a;
  } else if (d != 0.0) {
    a = (1.0 + b * c) / d;
  }
  return {a, b, c, d};
}

Eigen::Matrix4d TwoModeMap::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(kQ1, kQ1) = channel1.a();
  m(kQ1, kP1) = channel1.b();
  m(kP1, kQ1) = channel1.c();
  m(kP1, kP1) = channel1.d();
  m(kQ2, kQ2) = channel2.a();
  m(kQ2, kP2) = channel2.b();
  m(kP2, kQ2) = channel2.c();
  m(kP2, kP2) = channel2.d();
  return m;
}

Squeezing Squeezing::from_zeta(double zeta) {
  require_finite(zeta, "zeta");
  return Squeezing(std::tanh(2.0 * zeta), zeta);
}

Squeezing Squeezing::from_tau(double tau) {
  require_finite(tau, "tau");
  if (std::abs(tau) > 1.0) throw DomainError("tau = tanh(2 zeta) must lie in [-1, 1]");
  return Squeezing(tau, std::nullopt);
}

double Squeezing::cosh2z() const {
  if (zeta_) return std::cosh(2.0 * *zeta_);
  return 1.0 / std::sqrt((1.0 - tau_) * (1.0 + tau_));
}

double Squeezing::sinh2z() const {
  if (zeta_) return std::sinh(2.0 * *zeta_);
  return tau_ * cosh2z();
}

GaussianState::GaussianState(const Eigen::Matrix4d& form, double norm, std::optional<double> zeta)
    : form_(form), norm_(norm), zeta_(zeta) {
  if (!form.allFinite() || !std::isfinite(norm)) throw DomainError("Gaussian state entries must be finite");
  const double scale = std::max(1.0, form.cwiseAbs().maxCoeff());
  if ((form - form.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ContractViolation("quadratic form must be symmetric");
  }
  form_ = 0.5 * (form + form.transpose());
  Eigen::LLT<Eigen::Matrix4d> llt(form_);
  if (llt.info() != Eigen::Success) throw ContractViolation("quadratic form must be positive definite");
  if (norm == kPureNorm) {
    // det M = 1 for pure states. Rounding in det grows with the condition
    // number, which is of order |M|^2 when det M = 1.
    const double det = llt.matrixL().toDenseMatrix().diagonal().array().square().prod();
    if (std::abs(det - 1.0) > 1e-9 + 1e-12 * scale * scale) {
      throw ContractViolation("pure Gaussian state needs det M = 1, got " + std::to_string(det));
    }
  }
}

Eigen::Matrix4d GaussianState::covariance() const {
  // Pure states have symplectic M (M J M = J), so M^{-1} = -J M J exactly.
  // Near the EPR limit M is too ill-conditioned for a direct solve.
  Eigen::Matrix4d j = Eigen::Matrix4d::Zero();
  j.topRightCorner<2, 2>() = Eigen::Matrix2d::Identity();
  j.bottomLeftCorner<2, 2>() = -Eigen::Matrix2d::Identity();
  const double scale = std::max(1.0, form_.cwiseAbs().maxCoeff());
  if ((form_ * j * form_ - j).cwiseAbs().maxCoeff() <= 1e-10 * scale * scale) {
    return -0.5 * j * form_ * j;
  }
  return 0.5 * form_.llt().solve(Eigen::Matrix4d::Identity());
}

GaussianState tmss_state(double zeta, SignConvention convention) {
  return tmss_state(Squeezing::from_zeta(zeta), convention);
}

GaussianState tmss_state(const Squeezing& squeeze, SignConvention convention) {
  if (std::abs(squeeze.tau()) >= 1.0 && !squeeze.zeta()) {
    throw DomainError("the EPR limit |tau| = 1 has no normalizable Gaussian state");
  }
  const double c = squeeze.cosh2z();
  const double s = squeeze.sinh2z() * (convention == SignConvention::EprCorrelated ? 1.0 : -1.0);
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity() * c;
  m(kQ1, kQ2) = m(kQ2, kQ1) = -s;
  m(kP1, kP2) = m(kP2, kP1) = s;
  return GaussianState(m, GaussianState::kPureNorm, squeeze.zeta());
}

GaussianState evolve(const GaussianState& state, const TwoModeMap& map) {
  const TwoModeMap inv{map.channel1.inverse(), map.channel2.inverse()};
  const Eigen::Matrix4d s = inv.matrix();
  const Eigen::Matrix4d evolved = s.transpose() * state.form() * s;
  return GaussianState(0.5 * (evolved + evolved.transpose()), state.norm(), state.zeta());
}

Eigen::Matrix4d evolved_covariance(const GaussianState& state, const TwoModeMap& map) {
  const Eigen::Matrix4d t = map.matrix();
  return t * state.covariance() * t.transpose();
}

double wigner_eval(const GaussianState& state, const PhasePoint& x) {
  const Eigen::Vector4d v = x.vec();
  if (!v.allFinite()) throw DomainError("phase point must be finite");
  return state.norm() * std::exp(-v.dot(state.form() * v));
}

QQMarginal marginal_qq(const GaussianState& state) { return marginal_qq(state.covariance()); }

QQMarginal marginal_qq(const Eigen::Matrix4d& cov) {
  QQMarginal out;
  out.covariance << cov(kQ1, kQ1), cov(kQ1, kQ2), cov(kQ2, kQ1), cov(kQ2, kQ2);
  out.rho = cov(kQ1, kQ2) / std::sqrt(cov(kQ1, kQ1) * cov(kQ2, kQ2));
  return out;
}

Eigen::Matrix2d linear_form_covariance(const GaussianState& state, const Eigen::Vector4d& g1,
                                       const Eigen::Vector4d& g2) {
  Eigen::Matrix<double, 4, 2> g;
  g.col(0) = g1;
  g.col(1) = g2;
  return g.transpose() * state.covariance() * g;
}

}  // namespace phasebell
