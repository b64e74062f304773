#include "phasebell/bell.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "phasebell/correlations.hpp"
#include "phasebell/errors.hpp"

namespace phasebell::bell {
namespace {

using Vec4 = std::array<double, 4>;

CHSHSettings to_settings(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }

void check_box(const SearchBox& box) {
  for (double v : {box.lo1, box.hi1, box.lo2, box.hi2}) {
    if (!std::isfinite(v)) throw DomainError("search box must be finite");
  }
  if (box.hi1 < box.lo1 || box.hi2 < box.lo2) throw DomainError("search box bounds are inverted");
}

std::vector<double> axis(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = n == 1 ? lo : lo + (hi - lo) * k / (n - 1);
  return out;
}

struct Candidate {
  double value;
  std::array<int, 4> index;
};

}  // namespace

BellReport make_report(double e_ab, double e_abp, double e_apb, double e_apbp) {
  BellReport r{e_ab, e_abp, e_apb, e_apbp};
  r.chsh_value = e_ab + e_abp + e_apb - e_apbp;
  r.classical_ok = std::abs(r.chsh_value) <= 2.0 + kBoundTolerance;
  r.cirelson_ok = std::abs(r.chsh_value) <= kCirelson + kBoundTolerance;
  return r;
}

BellReport chsh(const Correlator& correlator, const CHSHSettings& s) {
  for (double v : {s.t1, s.t1p, s.t2, s.t2p}) {
    if (!std::isfinite(v)) throw DomainError("settings must be finite");
  }
  return make_report(correlator(s.t1, s.t2), correlator(s.t1, s.t2p), correlator(s.t1p, s.t2),
                     correlator(s.t1p, s.t2p));
}

OptimizedSettings optimize_settings(const Correlator& correlator, const SearchBox& box,
                                    const OptimizerBudget& budget) {
  check_box(box);
  if (budget.grid_points < 1 || budget.refine_starts < 1 || !(budget.min_step > 0.0)) {
    throw DomainError("optimizer budget must be positive");
  }
  const int n = budget.grid_points;
  const std::vector<double> g1 = axis(box.lo1, box.hi1, n);
  const std::vector<double> g2 = axis(box.lo2, box.hi2, n);

  std::vector<double> table(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) table[i * n + j] = correlator(g1[i], g2[j]);
  }
  std::int64_t evaluations = static_cast<std::int64_t>(n) * n;

  // Lexicographic sweep; a candidate only displaces strictly worse ones, so
  // ties keep the earliest settings.
  const std::size_t keep = static_cast<std::size_t>(budget.refine_starts);
  std::vector<Candidate> top;
  for (int i = 0; i < n; ++i) {
    for (int ip = 0; ip < n; ++ip) {
      for (int j = 0; j < n; ++j) {
        const double e_ab = table[i * n + j];
        const double e_apb = table[ip * n + j];
        for (int jp = 0; jp < n; ++jp) {
          const double v = std::abs(e_ab + table[i * n + jp] + e_apb - table[ip * n + jp]);
          if (top.size() == keep && v <= top.back().value) continue;
          const Candidate c{v, {i, ip, j, jp}};
          auto pos = std::find_if(top.begin(), top.end(), [&](const Candidate& t) { return v > t.value; });
          top.insert(pos, c);
          if (top.size() > keep) top.pop_back();
        }
      }
    }
  }

  const Vec4 lo{box.lo1, box.lo1, box.lo2, box.lo2};
  const Vec4 hi{box.hi1, box.hi1, box.hi2, box.hi2};
  const double spacing1 = n > 1 ? (box.hi1 - box.lo1) / (n - 1) : 0.0;
  const double spacing2 = n > 1 ? (box.hi2 - box.lo2) / (n - 1) : 0.0;

  auto objective = [&](const Vec4& v) {
    evaluations += 4;
    return std::abs(chsh(correlator, to_settings(v)).chsh_value);
  };

  OptimizedSettings best;
  best.value = -1.0;
  bool converged = true;
  for (const Candidate& c : top) {
    Vec4 x{g1[c.index[0]], g1[c.index[1]], g2[c.index[2]], g2[c.index[3]]};
    double fx = objective(x);
    double step1 = std::max(spacing1, budget.min_step);
    double step2 = std::max(spacing2, budget.min_step);
    while (std::max(step1, step2) >= budget.min_step) {
      if (evaluations > budget.max_evaluations) {
        converged = false;
        break;
      }
      bool improved = false;
      for (int k = 0; k < 4; ++k) {
        const double h = k < 2 ? step1 : step2;
        if (h < budget.min_step) continue;
        for (double dir : {-1.0, 1.0}) {
          Vec4 y = x;
          y[k] = std::clamp(y[k] + dir * h, lo[k], hi[k]);
          if (y[k] == x[k]) continue;
          const double fy = objective(y);
          if (fy > fx) {
            x = y;
            fx = fy;
            improved = true;
          }
        }
      }
      if (!improved) {
        step1 *= 0.5;
        step2 *= 0.5;
      }
    }
    if (fx > best.value) {
      best.settings = to_settings(x);
      best.value = fx;
    }
    if (!converged) break;
  }
  best.report = chsh(correlator, best.settings);
  best.converged = converged;
  best.evaluations = evaluations;
  return best;
}

double wedge_inequality(const Squeezing& squeeze, double theta) {
  if (!std::isfinite(theta)) throw DomainError("theta must be finite");
  const double tau = squeeze.tau();
  return 3.0 * orthant(tau * std::cos(theta)).p_pm - orthant(tau * std::cos(3.0 * theta)).p_pm;
}

}  // namespace phasebell::bell
