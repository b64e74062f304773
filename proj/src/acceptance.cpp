#include "phasebell/acceptance.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <random>

#include "phasebell/bell.hpp"
#include "phasebell/correlations.hpp"
#include "phasebell/fock_oracle.hpp"
#include "phasebell/observables.hpp"
#include "phasebell/superposition.hpp"

namespace phasebell::acceptance {
namespace {

constexpr double kEprTau = 1.0 - 1e-12;

struct Context {
  SuiteOptions options;
  SignConvention convention = SignConvention::EprCorrelated;
  std::vector<double> chsh_values;

  void record(double v) { chsh_values.push_back(v); }
};

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Check = std::function<Outcome(Context&)>;

double clock_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Outcome spin_parity(Context& ctx) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  double worst = 0.0;
  double at_half = 0.0;
  for (double z : {0.0, 0.25, 0.5, 1.0, 2.0}) {
    const auto r = fock::spin_bell_max(z, ctx.options.fock_n);
    ctx.record(r.value);
    ctx.record(r.in_plane_value);
    worst = std::max(worst, std::abs(r.value - r.closed_form));
    if (z == 0.5) at_half = r.value;
  }
  const double secs = clock_seconds(start);
  o.pass = worst <= 1e-4 && secs < 30.0;
  o.detail = fmt::format("max |opt - 2 sqrt(1+F^2)| = {:.2e} (tol 1e-4), zeta=0.5 -> {:.6f} at N={}{}", worst,
                         at_half, ctx.options.fock_n, secs < 30.0 ? "" : ", over the 30 s budget");
  return o;
}

Outcome pi_configuration(Context& ctx) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  double worst = 0.0;
  for (double z : {0.5, 1.0, 2.0}) {
    const int n = std::max(ctx.options.fock_n, fock::required_truncation(z, 1e-7));
    const auto r = fock::pi_chsh_optimum(z, n);
    ctx.record(r.value);
    worst = std::max(worst, std::abs(r.value - r.closed_form));
  }
  // Bisection on the Fock optimum for the crossing of 2; operators are built
  // once and reused.
  const int n = ctx.options.fock_n;
  const fock::PiOperators ops = fock::pi_operators(n);
  auto excess = [&](double z) {
    const auto r = fock::pi_chsh_optimum(fock::tmss_coeffs(z, n), ops);
    ctx.record(r.value);
    return r.value - 2.0;
  };
  double lo = 0.5, hi = 1.0;
  const bool bracketed = excess(lo) < 0.0 && excess(hi) > 0.0;
  while (bracketed && hi - lo > 1e-5) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) < 0.0 ? lo : hi) = mid;
  }
  const double root = 0.5 * (lo + hi);
  const double derived = 0.5 * std::asinh(std::tan(M_PI / (2.0 * M_SQRT2)));
  const double secs = clock_seconds(start);
  o.pass = bracketed && worst <= 5e-3 && std::abs(root - derived) <= 1e-3 && secs < 120.0;
  o.detail = fmt::format("max |opt - closed| = {:.2e} (tol 5e-3), crossing at {:.5f} vs {:.5f}{}", worst, root,
                         derived, secs < 120.0 ? "" : ", over the 2 min budget");
  return o;
}

Outcome f_law(Context& ctx) {
  Outcome o;
  double worst = 0.0;
  for (double z : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto c = fock::parity_correlator(z, ctx.options.fock_n);
    worst = std::max(worst, std::abs(c.sx_sx - std::tanh(2.0 * z)));
  }
  o.pass = worst <= 1e-8;
  o.detail = fmt::format("max |<SxSx> - tanh 2 zeta| = {:.2e} (tol 1e-8)", worst);
  return o;
}

Outcome h0_triple(Context& ctx) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  double worst_orthant = 0.0, worst_quad = 0.0, worst_sigma = 0.0;
  int failures = 0;
  std::uint64_t stream = 0;
  for (double z : {0.0, 0.25, 0.5, 1.0, 2.0}) {
    const auto sq = Squeezing::from_zeta(z);
    for (double theta : {0.0, 0.25, 0.5, 1.0, 2.0}) {
      const double t = 0.5 * theta;
      const double closed = correlator_h0(sq, t, t).value;
      const double orth = correlator_h0_orthant(sq, t, t, ctx.convention).value;
      const auto state = evolve(tmss_state(sq, ctx.convention), TwoModeMap::harmonic(t, t));
      const SignOfLinear a{Channel::One, 1.0, 0.0};
      const SignOfLinear b{Channel::Two, 1.0, 0.0};
      NumericBudget budget;
      budget.samples = ctx.options.samples;
      budget.seed = ctx.options.seed + 0x9e37ULL * ++stream;
      const double quad = correlator_numeric(state, a, b, Method::Quadrature, budget).value;
      const auto mc = correlator_numeric(state, a, b, Method::MonteCarlo, budget);
      worst_orthant = std::max(worst_orthant, std::abs(orth - closed));
      worst_quad = std::max(worst_quad, std::abs(quad - closed));
      const double floor = std::max(mc.std_error, 1.0 / static_cast<double>(mc.samples));
      worst_sigma = std::max(worst_sigma, std::abs(mc.value - closed) / floor);
      if (std::abs(orth - closed) > 1e-6 || std::abs(quad - closed) > 1e-6 || !within_std_errors(mc.value - closed, mc)) {
        ++failures;
      }
    }
  }
  const double secs = clock_seconds(start);
  o.pass = failures == 0 && secs < 300.0;
  o.detail = fmt::format(
      "25 points, {} samples each: orthant {:.1e}, quadrature {:.1e} (tol 1e-6), MC max {:.2f} stderr (gate 4), "
      "{} failing{}",
      ctx.options.samples, worst_orthant, worst_quad, worst_sigma, failures, secs < 300.0 ? "" : ", over the 5 min budget");
  return o;
}

Outcome epr_limit(Context& ctx) {
  Outcome o;
  const auto sq = Squeezing::from_tau(kEprTau);
  double worst = 0.0;
  for (double theta : {0.1, 0.3, 1.0}) {
    const double closed = orthant(sq.tau() * std::cos(theta)).p_pm;
    const auto state = evolve(tmss_state(sq, ctx.convention), TwoModeMap::harmonic(theta, 0.0));
    const double via_state = orthant(marginal_qq(state).rho).p_pm;
    const double target = theta / (2.0 * M_PI);
    worst = std::max({worst, std::abs(closed - target), std::abs(via_state - target)});
  }
  o.pass = worst <= 1e-5;
  o.detail = fmt::format("tau = 1 - 1e-12: max |P+-(theta) - theta/2pi| = {:.2e} (tol 1e-5)", worst);
  return o;
}

Outcome wedge(Context&) {
  Outcome o;
  double lowest = 1.0;
  for (double z : {0.0, 0.5, 1.0, 2.0, 5.0}) {
    for (int k = 0; k <= 100; ++k) lowest = std::min(lowest, bell::wedge_inequality(Squeezing::from_zeta(z), k * M_PI / 300));
  }
  double epr_high = -1.0;
  for (int k = 0; k <= 100; ++k) {
    epr_high = std::max(epr_high, bell::wedge_inequality(Squeezing::from_tau(kEprTau), k * M_PI / 300));
  }
  o.pass = lowest >= -1e-12 && epr_high <= 1e-5;
  o.detail = fmt::format("grid minimum {:.3e} (>= -1e-12), EPR-limit maximum {:.2e} (<= 1e-5)", lowest, epr_high);
  return o;
}

Outcome free_saturation(Context& ctx) {
  Outcome o;
  const auto sq = Squeezing::from_tau(kEprTau);
  const double big_t = 1e3;
  const bell::CHSHSettings s{0.0, big_t, 0.0, big_t};
  const auto closed = bell::chsh([&](double a, double b) { return correlator_hf(sq, a, b).value; }, s);
  const auto via_state = bell::chsh(
      [&](double a, double b) { return correlator_hf_orthant(sq, a, b, ctx.convention).value; }, s);
  ctx.record(closed.chsh_value);
  ctx.record(via_state.chsh_value);
  const double sum = closed.chsh_value * M_PI / 2.0;
  o.pass = std::abs(sum - M_PI) <= 5e-3 && std::abs(closed.chsh_value - 2.0) <= 4e-3 &&
           std::abs(via_state.chsh_value - 2.0) <= 4e-3;
  o.detail = fmt::format("arcsin sum {:.6f} vs pi, CHSH {:.6f} (closed), {:.6f} (evolved state)", sum,
                         closed.chsh_value, via_state.chsh_value);
  return o;
}

Outcome no_phase_space_violation(Context& ctx) {
  Outcome o;
  double highest = 0.0;
  bool converged = true;
  for (double z : {0.5, 2.0}) {
    const auto sq = Squeezing::from_zeta(z);
    const auto h0 = bell::optimize_settings([&](double a, double b) { return correlator_h0(sq, a, b).value; },
                                            {0.0, 2.0 * M_PI, 0.0, 2.0 * M_PI});
    const auto hf = bell::optimize_settings([&](double a, double b) { return correlator_hf(sq, a, b).value; },
                                            {-10.0, 10.0, -10.0, 10.0});
    for (const auto* r : {&h0, &hf}) {
      ctx.record(r->report.chsh_value);
      highest = std::max(highest, r->value);
      converged = converged && r->converged;
    }
  }
  o.pass = highest <= 2.0 + bell::kBoundTolerance && converged;
  o.detail = fmt::format("largest optimized |CHSH| over H0 and Hf families = {:.12f} (<= 2 + 1e-9)", highest);
  return o;
}

Outcome cirelson_guard(Context& ctx) {
  Outcome o;
  double highest = 0.0;
  for (double v : ctx.chsh_values) highest = std::max(highest, std::abs(v));
  o.pass = !ctx.chsh_values.empty() && highest <= bell::kCirelson + bell::kBoundTolerance;
  o.detail = fmt::format("{} CHSH values, largest {:.12f} (<= 2 sqrt 2 + 1e-9)", ctx.chsh_values.size(), highest);
  return o;
}

Outcome negativity(Context&) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  const auto neg = min_wigner_scan(rotated_state(0.5, M_PI / 4), 4.0, 21);
  const auto pos = min_wigner_scan(rotated_state(0.5, 0.0), 4.0, 21);
  const double secs = clock_seconds(start);
  o.pass = neg.value < -1e-4 && pos.value >= 0.0 && secs < 60.0;
  o.detail = fmt::format("gamma=pi/4 min {:.6e} at ({:.6g}, {:.6g}, {:.6g}, {:.6g}); gamma=0 min {:.3e}{}", neg.value,
                         neg.point.q1, neg.point.q2, neg.point.p1, neg.point.p2, pos.value,
                         secs < 60.0 ? "" : ", over the 1 min budget");
  return o;
}

Outcome properness(Context&) {
  Outcome o;
  bool verdicts = classify(SignOfLinear{}).proper && classify(FunctionOfLinear{}).proper &&
                  !classify(ParityZ{}).proper && !classify(ParityYSingular{}).proper &&
                  !classify(QuadraticHO{}).proper;
  std::mt19937_64 rng(35);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::normal_distribution<double> g;
  int closure_failures = 0;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    double a = u(rng), b = u(rng), c = u(rng);
    if (std::abs(a) < 0.1) a = 0.1 + std::abs(a);
    const SymplecticMap m(a, b, c, (1.0 + b * c) / a);
    const PhasePoint x{g(rng), g(rng), g(rng), g(rng)};
    PhasePoint mx = x;
    mx.q1 = m.a() * x.q1 + m.b() * x.p1;
    mx.p1 = m.c() * x.q1 + m.d() * x.p1;
    const DynamicalVariable dvs[] = {SignOfLinear{Channel::One, u(rng), u(rng)},
                                     FunctionOfLinear{Channel::One, u(rng), u(rng), LinearFunction::Tanh}};
    for (const auto& dv : dvs) {
      const auto moved = transform_dv(dv, m);
      if (!classify(moved).proper) ++closure_failures;
      const double diff = std::abs(std::get<double>(wigner_rep(moved, x)) - std::get<double>(wigner_rep(dv, mx)));
      worst = std::max(worst, diff);
    }
  }
  o.pass = verdicts && closure_failures == 0 && worst <= 1e-12;
  o.detail = fmt::format("catalog verdicts {}, 1000 random maps: {} closure failures, pullback error {:.1e}",
                         verdicts ? "ok" : "WRONG", closure_failures, worst);
  return o;
}

Outcome evolution_covariance(Context& ctx) {
  Outcome o;
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> zd(0.0, 1.5), td(-M_PI, M_PI);
  double worst = 0.0;
  const double sign = ctx.convention == SignConvention::EprCorrelated ? 1.0 : -1.0;
  for (int i = 0; i < 100; ++i) {
    const double z = zd(rng), t1 = td(rng), t2 = td(rng);
    const double c = std::cosh(2 * z), s = sign * std::sinh(2 * z), th = t1 + t2;
    Eigen::Matrix4d h = Eigen::Matrix4d::Identity() * c;
    h(kQ1, kQ2) = h(kQ2, kQ1) = -s * std::cos(th);
    h(kP1, kP2) = h(kP2, kP1) = s * std::cos(th);
    h(kQ1, kP2) = h(kP2, kQ1) = s * std::sin(th);
    h(kQ2, kP1) = h(kP1, kQ2) = s * std::sin(th);
    Eigen::Matrix4d f = Eigen::Matrix4d::Zero();
    f(kQ1, kQ1) = f(kQ2, kQ2) = c;
    f(kP1, kP1) = c * (1 + t1 * t1);
    f(kP2, kP2) = c * (1 + t2 * t2);
    f(kQ1, kP1) = f(kP1, kQ1) = -c * t1;
    f(kQ2, kP2) = f(kP2, kQ2) = -c * t2;
    f(kQ1, kQ2) = f(kQ2, kQ1) = -s;
    f(kQ1, kP2) = f(kP2, kQ1) = s * t2;
    f(kP1, kQ2) = f(kQ2, kP1) = s * t1;
    f(kP1, kP2) = f(kP2, kP1) = s * (1 - t1 * t2);
    const auto st = tmss_state(z, ctx.convention);
    worst = std::max(worst, (evolve(st, TwoModeMap::harmonic(t1, t2)).form() - h).cwiseAbs().maxCoeff());
    worst = std::max(worst, (evolve(st, TwoModeMap::free(t1, t2)).form() - f).cwiseAbs().maxCoeff());
  }
  o.pass = worst <= 1e-12;
  o.detail = fmt::format("100 random (zeta, t1, t2): max coefficient error {:.1e} (tol 1e-12)", worst);
  return o;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const SuiteOptions& options) {
  Context ctx;
  ctx.options = options;
  ctx.convention = options.flip_sign_convention ? SignConvention::Flipped : SignConvention::EprCorrelated;

  const std::vector<std::pair<std::string, Check>> checks = {
      {"spin-parity maximal violation", spin_parity},
      {"Pi-configuration violation", pi_configuration},
      {"parity correlation F = tanh 2 zeta", f_law},
      {"H0 correlator triple agreement", h0_triple},
      {"EPR limit P+- = theta/2pi", epr_limit},
      {"wedge inequality", wedge},
      {"free-flow CHSH saturation", free_saturation},
      {"no phase-space violation for proper variables", no_phase_space_violation},
      {"Cirel'son guard", cirelson_guard},
      {"Wigner negativity witness", negativity},
      {"properness and closure", properness},
      {"evolution covariance", evolution_covariance},
  };

  std::vector<CriterionResult> out;
  int id = 0;
  for (const auto& [name, check] : checks) {
    CriterionResult r;
    r.id = ++id;
    r.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome o = check(ctx);
      r.pass = o.pass;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = clock_seconds(start);
    out.push_back(r);
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  return fmt::format("{} [{:02d}] {}: {} ({:.2f} s)", r.pass ? "PASS" : "FAIL", r.id, r.name, r.detail, r.seconds);
}

}  // namespace phasebell::acceptance
