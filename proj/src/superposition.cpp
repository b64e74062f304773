#include "phasebell/superposition.hpp"

#include <Eigen/LU>

#include <cmath>
#include <limits>

#include "phasebell/errors.hpp"

namespace phasebell {
namespace {

constexpr double kDropCoefficient = 1e-15;

void check_packet(const GaussianWavepacket& g) {
  if (!g.form.allFinite() || !std::isfinite(std::abs(g.amplitude))) {
    throw DomainError("wavepacket entries must be finite");
  }
  const Eigen::Matrix2d re = g.form.real();
  if (std::abs(re(0, 1) - re(1, 0)) > 1e-12 * (1.0 + re.cwiseAbs().maxCoeff()) ||
      std::abs(g.form(0, 1) - g.form(1, 0)) > 1e-12 * (1.0 + g.form.cwiseAbs().maxCoeff())) {
    throw ContractViolation("wavepacket form must be symmetric");
  }
  if (!(re(0, 0) > 0.0 && re.determinant() > 0.0)) {
    throw ContractViolation("wavepacket form needs a positive-definite real part");
  }
}

// For 2x2 S with positive-definite real part both eigenvalues lie in the open
// right half-plane, so the principal root of det S is the continuous branch.
cplx sqrt_det(const Eigen::Matrix2cd& s) { return std::sqrt(s.determinant()); }

// u^T M v without conjugation.
cplx bilinear(const Eigen::Vector2cd& u, const Eigen::Matrix2cd& m, const Eigen::Vector2cd& v) {
  return (u.array() * (m * v).array()).sum();
}

}  // namespace

cplx GaussianWavepacket::operator()(double q1, double q2) const {
  const Eigen::Vector2cd q(q1, q2);
  return amplitude * std::exp(-0.5 * bilinear(q, form, q));
}

GaussianWavepacket tmss_wavepacket(double zeta) {
  if (!std::isfinite(zeta)) throw DomainError("zeta must be finite");
  const double c = std::cosh(2.0 * zeta);
  const double s = std::sinh(2.0 * zeta);
  Eigen::Matrix2cd a;
  a << c, -s, -s, c;
  return {a, cplx(1.0 / std::sqrt(M_PI), 0.0)};
}

cplx overlap(const GaussianWavepacket& bra, const GaussianWavepacket& ket) {
  const Eigen::Matrix2cd s = ket.form + bra.form.conjugate();
  return std::conj(bra.amplitude) * ket.amplitude * (2.0 * M_PI) / sqrt_det(s);
}

cplx cross_wigner(const GaussianWavepacket& ket, const GaussianWavepacket& bra, const PhasePoint& x) {
  // Exponent of ket(q + y/2) conj(bra(q - y/2)):
  //   -q^T S q / 2 - y^T S y / 8 - q^T D y / 2,  S = A_k + A_b*, D = A_k - A_b*.
  // Completing the square in y against e^{-i p.y} with J = -(D q / 2 + i p):
  //   W = a_k conj(a_b) 2 / (pi sqrt(det S)) exp(-q^T S q / 2 + 2 J^T S^-1 J).
  const Eigen::Matrix2cd s = ket.form + bra.form.conjugate();
  const Eigen::Matrix2cd d = ket.form - bra.form.conjugate();
  const Eigen::Vector2cd q(x.q1, x.q2);
  const Eigen::Vector2cd p(x.p1, x.p2);
  const Eigen::Vector2cd j = -(0.5 * (d * q) + cplx(0.0, 1.0) * p);
  const Eigen::Matrix2cd s_inv = s.inverse();
  const cplx exponent = -0.5 * bilinear(q, s, q) + 2.0 * bilinear(j, s_inv, j);
  const cplx pref = ket.amplitude * std::conj(bra.amplitude) * 2.0 / (M_PI * sqrt_det(s));
  return pref * std::exp(exponent);
}

WavepacketSuperposition::WavepacketSuperposition(std::vector<SuperpositionTerm> terms) {
  double largest = 0.0;
  for (const auto& t : terms) {
    check_packet(t.packet);
    if (!std::isfinite(std::abs(t.coefficient))) throw DomainError("coefficients must be finite");
    largest = std::max(largest, std::abs(t.coefficient));
  }
  for (auto& t : terms) {
    if (std::abs(t.coefficient) > kDropCoefficient * largest) terms_.push_back(std::move(t));
  }
  const double n2 = norm_squared();
  if (!(n2 > 1e-300)) throw DomainError("superposition has zero norm");
  const double scale = 1.0 / std::sqrt(n2);
  for (auto& t : terms_) t.coefficient *= scale;
}

double WavepacketSuperposition::norm_squared() const {
  cplx acc = 0.0;
  for (const auto& bra : terms_) {
    for (const auto& ket : terms_) {
      acc += std::conj(bra.coefficient) * ket.coefficient * overlap(bra.packet, ket.packet);
    }
  }
  return acc.real();
}

cplx WavepacketSuperposition::wavefunction(double q1, double q2) const {
  cplx acc = 0.0;
  for (const auto& t : terms_) acc += t.coefficient * t.packet(q1, q2);
  return acc;
}

WavepacketSuperposition rotated_state(double zeta, double gamma) {
  if (!std::isfinite(zeta) || !std::isfinite(gamma)) throw DomainError("zeta and gamma must be finite");
  return WavepacketSuperposition({
      {cplx(std::cos(gamma), 0.0), tmss_wavepacket(zeta)},
      {cplx(std::sin(gamma), 0.0), tmss_wavepacket(-zeta)},
  });
}

cplx wigner_sum(const WavepacketSuperposition& state, const PhasePoint& x) {
  cplx acc = 0.0;
  for (const auto& ket : state.terms()) {
    for (const auto& bra : state.terms()) {
      acc += ket.coefficient * std::conj(bra.coefficient) * cross_wigner(ket.packet, bra.packet, x);
    }
  }
  return acc;
}

double wigner_eval_superposition(const WavepacketSuperposition& state, const PhasePoint& x) {
  if (!x.vec().allFinite()) throw DomainError("phase point must be finite");
  return wigner_sum(state, x).real();
}

WignerMinimum min_wigner_scan(const WavepacketSuperposition& state, double box, int grid_points) {
  if (!(box > 0.0) || !std::isfinite(box)) throw DomainError("scan box must be positive");
  if (grid_points < 2) throw DomainError("scan needs at least 2 points per axis");
  std::vector<double> axis(grid_points);
  for (int k = 0; k < grid_points; ++k) axis[k] = -box + 2.0 * box * k / (grid_points - 1);

  WignerMinimum best{{axis[0], axis[0], axis[0], axis[0]}, std::numeric_limits<double>::infinity()};
  for (double q1 : axis) {
    for (double q2 : axis) {
      for (double p1 : axis) {
        for (double p2 : axis) {
          const PhasePoint x{q1, q2, p1, p2};
          const double w = wigner_eval_superposition(state, x);
          if (w < best.value) best = {x, w};
        }
      }
    }
  }
  return best;
}

WignerMinimum refine_minimum(const WavepacketSuperposition& state, const WignerMinimum& start,
                             double initial_step, double tolerance) {
  WignerMinimum best = start;
  best.value = wigner_eval_superposition(state, start.point);
  double step = initial_step;
  while (step > tolerance) {
    bool improved = false;
    for (int axis = 0; axis < 4; ++axis) {
      for (double dir : {-1.0, 1.0}) {
        Eigen::Vector4d v = best.point.vec();
        v(axis) += dir * step;
        const PhasePoint x = PhasePoint::from(v);
        const double w = wigner_eval_superposition(state, x);
        if (w < best.value) {
          best = {x, w};
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

}  // namespace phasebell
