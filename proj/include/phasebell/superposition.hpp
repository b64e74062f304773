#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "phasebell/phase_space.hpp"

namespace phasebell {

using cplx = std::complex<double>;

/// psi(q1, q2) = amplitude * exp(-q^T A q / 2), A complex symmetric with
/// positive-definite real part.
struct GaussianWavepacket {
  Eigen::Matrix2cd form;
  cplx amplitude;

  cplx operator()(double q1, double q2) const;
};

/// Coordinate wavefunction of the squeezed vacuum, <q1 q2|S(zeta)|00>.
GaussianWavepacket tmss_wavepacket(double zeta);

/// <bra|ket> in closed form.
cplx overlap(const GaussianWavepacket& bra, const GaussianWavepacket& ket);

/// Cross-Wigner function (2 pi)^-2 int dy e^{-i p.y} ket(q + y/2) conj(bra(q - y/2)),
/// evaluated as a complex Gaussian integral.
cplx cross_wigner(const GaussianWavepacket& ket, const GaussianWavepacket& bra, const PhasePoint& x);

struct SuperpositionTerm {
  cplx coefficient;
  GaussianWavepacket packet;
};

/// Normalized superposition sum_i c_i |g_i>. Terms with negligible
/// coefficients are dropped at construction.
class WavepacketSuperposition {
 public:
  explicit WavepacketSuperposition(std::vector<SuperpositionTerm> terms);

  const std::vector<SuperpositionTerm>& terms() const { return terms_; }
  cplx wavefunction(double q1, double q2) const;
  /// <psi|psi> recomputed from the stored (normalized) terms.
  double norm_squared() const;

 private:
  std::vector<SuperpositionTerm> terms_;
};

/// cos(gamma)|zeta> + sin(gamma)|-zeta>, normalized with the overlap
/// <zeta|-zeta> = 1 / cosh(2 zeta) taken into account.
WavepacketSuperposition rotated_state(double zeta, double gamma);

/// Complex sum over all ket/bra pairs; the imaginary part is rounding only.
cplx wigner_sum(const WavepacketSuperposition& state, const PhasePoint& x);

double wigner_eval_superposition(const WavepacketSuperposition& state, const PhasePoint& x);

struct WignerMinimum {
  PhasePoint point;
  double value = 0.0;
};

/// Minimum over the grid {-box .. box}^4 with `grid_points` per axis.
/// Ties resolve to the lexicographically first point.
WignerMinimum min_wigner_scan(const WavepacketSuperposition& state, double box, int grid_points);

/// Pattern-search descent from `start`, halving the step down to `tolerance`.
WignerMinimum refine_minimum(const WavepacketSuperposition& state, const WignerMinimum& start,
                             double initial_step, double tolerance = 1e-9);

}  // namespace phasebell
