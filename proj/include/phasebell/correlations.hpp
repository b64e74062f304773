#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "phasebell/linear_forms.hpp"
#include "phasebell/observables.hpp"
#include "phasebell/phase_space.hpp"

namespace phasebell {

/// Probabilities of the four (sgn u, sgn v) outcomes of a zero-mean bivariate
/// Gaussian with correlation rho.
struct OrthantProbabilities {
  double p_pp = 0.25;
  double p_pm = 0.25;
  double p_mp = 0.25;
  double p_mm = 0.25;

  double correlation() const { return p_pp + p_mm - p_pm - p_mp; }
};

/// P(++) = P(--) = 1/4 + asin(rho) / 2pi; P(+-) = P(-+) = 1/4 - asin(rho) / 2pi.
OrthantProbabilities orthant(double rho);

enum class Method { ClosedForm, Orthant, Quadrature, MonteCarlo };

std::string to_string(Method m);

struct CorrelationResult {
  double value = 0.0;
  Method method = Method::ClosedForm;
  double std_error = 0.0;  // Monte-Carlo only
  std::int64_t samples = 0;
  std::optional<double> chi;  // cos(chi) = tanh(2 zeta) cos(t1 + t2); diagnostic only
  bool flagged = false;       // Monte-Carlo missed its target standard error
};

/// Oscillator flow on both channels: E = (2/pi) asin(tanh(2 zeta) cos(t1 + t2)).
CorrelationResult correlator_h0(const Squeezing& squeeze, double t1, double t2);

/// Free flow on both channels: E = (2/pi) asin(alpha(t1, t2) tanh(2 zeta)).
CorrelationResult correlator_hf(const Squeezing& squeeze, double t1, double t2);

double free_alpha(double t1, double t2);

/// Same correlators through the evolved Gaussian state: marginal q1-q2
/// correlation, then orthant probabilities.
CorrelationResult correlator_h0_orthant(const Squeezing& squeeze, double t1, double t2,
                                        SignConvention convention = SignConvention::EprCorrelated);
CorrelationResult correlator_hf_orthant(const Squeezing& squeeze, double t1, double t2,
                                        SignConvention convention = SignConvention::EprCorrelated);

struct NumericBudget {
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 0x5eedULL;
  QuadratureOptions quadrature{};
  std::optional<double> target_std_error;
  unsigned workers = 0;  // 0: hardware concurrency
};

/// int W A B over phase space for proper observables A on channel 1 and B on
/// channel 2, by split-panel quadrature or by sampling W.
CorrelationResult correlator_numeric(const GaussianState& state, const DynamicalVariable& a,
                                     const DynamicalVariable& b, Method method,
                                     const NumericBudget& budget = {});

/// Monte-Carlo agreement gate: |diff| <= k * max(std_error, 1/samples). The
/// floor covers runs where every sample agreed and the sample variance is 0.
bool within_std_errors(double diff, const CorrelationResult& mc, double k = 4.0);

}  // namespace phasebell
