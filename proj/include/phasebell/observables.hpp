#pragma once

#include <string>
#include <variant>

#include "phasebell/linear_forms.hpp"
#include "phasebell/phase_space.hpp"

namespace phasebell {

enum class Channel { One = 1, Two = 2 };

// The closed catalog of observables. Linear variants are f(a q + b p) on one
// channel; the remaining three have no pointwise eigenvalue-valued
// representative.
struct SignOfLinear {
  Channel channel = Channel::One;
  double a = 1.0;
  double b = 0.0;
};

struct FunctionOfLinear {
  Channel channel = Channel::One;
  double a = 1.0;
  double b = 0.0;
  LinearFunction f = LinearFunction::Tanh;
};

/// Photon-number parity S_z = -(-1)^N; representative -pi delta(q) delta(p).
struct ParityZ {
  Channel channel = Channel::One;
};

/// Configurational Pi_y; representative -delta(q) PV(1/p).
struct ParityYSingular {
  Channel channel = Channel::One;
};

/// Oscillator energy (p^2 + q^2) / 2.
struct QuadraticHO {
  Channel channel = Channel::One;
};

using DynamicalVariable =
    std::variant<SignOfLinear, FunctionOfLinear, ParityZ, ParityYSingular, QuadraticHO>;

/// Refusal to evaluate a distributional representative pointwise.
struct Singular {
  std::string representative;
};

using Representative = std::variant<double, Singular>;

Representative wigner_rep(const DynamicalVariable& dv, const PhasePoint& x);

/// Heisenberg picture: (a, b) -> (a a_m + b c_m, a b_m + b d_m), so that
/// wigner_rep(transform_dv(dv, m), x) == wigner_rep(dv, m(x)).
DynamicalVariable transform_dv(const DynamicalVariable& dv, const SymplecticMap& map);

struct SpectrumDescriptor {
  enum class Kind { TwoPoint, Interval, HalfIntegerLadder };
  Kind kind = Kind::TwoPoint;
  double lo = -1.0;
  double hi = 1.0;
};

struct ClassificationReport {
  bool proper = false;
  bool bounded = false;
  std::string reason;
  SpectrumDescriptor spectrum;
  // Range of the representative as a function on phase space; `pointwise` is
  // false for distributional representatives.
  bool pointwise = true;
  double rep_lo = 0.0;
  double rep_hi = 0.0;
  std::string representative;
};

ClassificationReport classify(const DynamicalVariable& dv);

std::string name_of(const DynamicalVariable& dv);
Channel channel_of(const DynamicalVariable& dv);

/// Linear variants as a phase-space observable f(g . x); throws
/// UnsupportedObservable for the others.
LinearObservable as_linear(const DynamicalVariable& dv);

/// |<A^k> - int W (W_A)^k|. The left side integrates f^k against the quantum
/// distribution of the quadrature a q + b p (spectral calculus); the right side
/// is the phase-space average of the k-th power of the representative.
double nondispersive_check(const DynamicalVariable& dv, const GaussianState& state, int k,
                           const QuadratureOptions& opts = {});

}  // namespace phasebell
