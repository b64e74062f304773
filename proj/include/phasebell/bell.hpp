#pragma once

#include <cstdint>
#include <functional>

#include "phasebell/phase_space.hpp"

namespace phasebell::bell {

/// Settings (times or angles) for A, A', B, B'.
struct CHSHSettings {
  double t1 = 0.0;
  double t1p = 0.0;
  double t2 = 0.0;
  double t2p = 0.0;
};

inline constexpr double kBoundTolerance = 1e-9;
inline constexpr double kCirelson = 2.8284271247461900976;  // 2 sqrt 2

struct BellReport {
  double e_ab = 0.0;
  double e_abp = 0.0;
  double e_apb = 0.0;
  double e_apbp = 0.0;
  double chsh_value = 0.0;
  bool classical_ok = true;
  bool cirelson_ok = true;
};

/// E(setting on channel 1, setting on channel 2).
using Correlator = std::function<double(double, double)>;

/// E(a,b) + E(a,b') + E(a',b) - E(a',b').
BellReport make_report(double e_ab, double e_abp, double e_apb, double e_apbp);
BellReport chsh(const Correlator& correlator, const CHSHSettings& s);

struct SearchBox {
  double lo1 = 0.0;
  double hi1 = 2.0 * M_PI;
  double lo2 = 0.0;
  double hi2 = 2.0 * M_PI;
};

struct OptimizerBudget {
  int grid_points = 32;
  int refine_starts = 4;
  double min_step = 1e-6;
  std::int64_t max_evaluations = 5'000'000;
};

struct OptimizedSettings {
  CHSHSettings settings;
  BellReport report;
  double value = 0.0;  // |CHSH| attained at `settings`
  bool converged = true;
  std::int64_t evaluations = 0;
};

/// Maximizes |CHSH| over the box: E is tabulated once on the per-channel grids
/// (grid_points per axis), every grid combination of the four settings is
/// scanned, and the best few are refined by coordinate descent with step
/// halving down to min_step. Ties go to the lexicographically smallest
/// settings. The value is attained, hence a lower bound on the supremum.
OptimizedSettings optimize_settings(const Correlator& correlator, const SearchBox& box,
                                    const OptimizerBudget& budget = {});

/// 3 P+-(theta) - P+-(3 theta) for the oscillator-evolved squeezed vacuum.
double wedge_inequality(const Squeezing& squeeze, double theta);

}  // namespace phasebell::bell
