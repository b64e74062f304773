#pragma once

#include <cmath>
#include <vector>

namespace phasebell::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  template <typename F>
  double integrate(F&& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
    return acc;
  }
};

/// Gauss-Hermite rule for the weight exp(-x^2) on the real line, computed by
/// Golub-Welsch. Rules are cached per order and safe to share across threads.
const Rule& gauss_hermite(int order);

/// Gauss-Legendre rule on [-1, 1].
const Rule& gauss_legendre(int order);

/// Rule for E[f(Y)], Y ~ N(0,1): Gauss-Hermite nodes scaled by sqrt(2).
Rule standard_normal(int order);

/// Composite Gauss-Legendre rule on [from, to], panels graded quadratically so
/// they are finest next to `from`. Used on either side of a discontinuity.
Rule graded_interval(double from, double to, int panels, int order);

/// Options for integrals with a jump: split at the jump, then graded panels
/// out to `reach` standard deviations on each side.
struct SplitOptions {
  int panels = 64;
  int order = 16;
  double reach = 12.0;
};

/// Rule for E[f(Y)], Y ~ N(0,1) when f jumps at `split`. The normal density
/// is folded into the weights.
Rule standard_normal_split(double split, const SplitOptions& opts);

/// Same, with extra breaks at split +- feature_width for integrands that also
/// vary on that scale next to the split. Width 0 disables the extra breaks.
Rule standard_normal_split(double split, const SplitOptions& opts, double feature_width);

inline double normal_pdf(double x) {
  constexpr double inv_sqrt_2pi = 0.39894228040143267794;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

}  // namespace phasebell::quad
