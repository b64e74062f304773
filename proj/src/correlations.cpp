#include "phasebell/correlations.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "phasebell/errors.hpp"
#include "phasebell/rng.hpp"

namespace phasebell {
namespace {

constexpr double kRhoSlack = 1e-12;
constexpr int kChunks = 64;

void check_finite(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("times must be finite");
}

double clamp_rho(double rho) {
  if (!std::isfinite(rho) || std::abs(rho) > 1.0 + kRhoSlack) throw DomainError("|rho| must not exceed 1");
  return std::clamp(rho, -1.0, 1.0);
}

CorrelationResult from_rho(double rho, Method method) {
  CorrelationResult r;
  r.method = method;
  r.value = orthant(rho).correlation();
  r.chi = std::acos(clamp_rho(rho));
  return r;
}

struct ChunkSums {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::int64_t n = 0;
};

CorrelationResult monte_carlo(const GaussianState& state, const LinearObservable& a,
                              const LinearObservable& b, const NumericBudget& budget) {
  if (budget.samples < 1) throw DomainError("Monte-Carlo needs at least one sample");
  Eigen::LLT<Eigen::Matrix4d> llt(state.covariance());
  if (llt.info() != Eigen::Success) throw ContractViolation("covariance is not positive definite");
  const Eigen::Matrix4d lower = llt.matrixL();
  // Only the two projections g . L z are needed per sample.
  const Eigen::Vector4d ha = lower.transpose() * a.form;
  const Eigen::Vector4d hb = lower.transpose() * b.form;

  std::vector<ChunkSums> chunks(kChunks);
  auto run_chunk = [&](int k) {
    const std::int64_t base = budget.samples / kChunks;
    const std::int64_t n = base + (k < budget.samples % kChunks ? 1 : 0);
    CounterRng rng(budget.seed, static_cast<std::uint64_t>(k));
    ChunkSums s;
    for (std::int64_t i = 0; i < n; ++i) {
      const auto [z0, z1] = rng.normal_pair();
      const auto [z2, z3] = rng.normal_pair();
      const Eigen::Vector4d z(z0, z1, z2, z3);
      const double v = apply_power(a.f, ha.dot(z), a.power) * apply_power(b.f, hb.dot(z), b.power);
      s.sum += v;
      s.sum_sq += v * v;
    }
    s.n = n;
    chunks[k] = s;
  };

  unsigned workers = budget.workers ? budget.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, kChunks);
  if (workers <= 1) {
    for (int k = 0; k < kChunks; ++k) run_chunk(k);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int k = static_cast<int>(w); k < kChunks; k += static_cast<int>(workers)) run_chunk(k);
      });
    }
    for (auto& t : pool) t.join();
  }

  // Fixed reduction order keeps the result independent of the worker count.
  ChunkSums total;
  for (const auto& s : chunks) {
    total.sum += s.sum;
    total.sum_sq += s.sum_sq;
    total.n += s.n;
  }
  const double n = static_cast<double>(total.n);
  const double mean = total.sum / n;
  const double var = total.n > 1 ? std::max(0.0, (total.sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;

  CorrelationResult r;
  r.method = Method::MonteCarlo;
  r.value = mean;
  r.std_error = std::sqrt(var / n);
  r.samples = total.n;
  if (budget.target_std_error && r.std_error > *budget.target_std_error) r.flagged = true;
  return r;
}

}  // namespace

OrthantProbabilities orthant(double rho) {
  rho = clamp_rho(rho);
  const double shift = std::asin(rho) / (2.0 * M_PI);
  return {0.25 + shift, 0.25 - shift, 0.25 - shift, 0.25 + shift};
}

std::string to_string(Method m) {
  switch (m) {
    case Method::ClosedForm: return "closed-form";
    case Method::Orthant: return "orthant";
    case Method::Quadrature: return "quadrature";
    case Method::MonteCarlo: return "monte-carlo";
  }
  return "unknown";
}

double free_alpha(double t1, double t2) {
  check_finite(t1, t2);
  return (1.0 - t1 * t2) / std::sqrt((1.0 + t1 * t1) * (1.0 + t2 * t2));
}

CorrelationResult correlator_h0(const Squeezing& squeeze, double t1, double t2) {
  check_finite(t1, t2);
  const double rho = squeeze.tau() * std::cos(t1 + t2);
  CorrelationResult r = from_rho(rho, Method::ClosedForm);
  r.value = (2.0 / M_PI) * std::asin(clamp_rho(rho));
  return r;
}

CorrelationResult correlator_hf(const Squeezing& squeeze, double t1, double t2) {
  const double rho = free_alpha(t1, t2) * squeeze.tau();
  CorrelationResult r = from_rho(rho, Method::ClosedForm);
  r.value = (2.0 / M_PI) * std::asin(clamp_rho(rho));
  return r;
}

CorrelationResult correlator_h0_orthant(const Squeezing& squeeze, double t1, double t2,
                                        SignConvention convention) {
  check_finite(t1, t2);
  const Eigen::Matrix4d cov = evolved_covariance(tmss_state(squeeze, convention), TwoModeMap::harmonic(t1, t2));
  return from_rho(marginal_qq(cov).rho, Method::Orthant);
}

CorrelationResult correlator_hf_orthant(const Squeezing& squeeze, double t1, double t2,
                                        SignConvention convention) {
  check_finite(t1, t2);
  const Eigen::Matrix4d cov = evolved_covariance(tmss_state(squeeze, convention), TwoModeMap::free(t1, t2));
  return from_rho(marginal_qq(cov).rho, Method::Orthant);
}

CorrelationResult correlator_numeric(const GaussianState& state, const DynamicalVariable& a,
                                     const DynamicalVariable& b, Method method,
                                     const NumericBudget& budget) {
  if (channel_of(a) != Channel::One || channel_of(b) != Channel::Two) {
    throw ContractViolation("correlator needs the first observable on channel 1 and the second on channel 2");
  }
  for (const auto* dv : {&a, &b}) {
    if (!classify(*dv).proper) {
      throw UnsupportedObservable(name_of(*dv) + " has no eigenvalue-valued phase-space representative");
    }
  }
  const LinearObservable la = as_linear(a);
  const LinearObservable lb = as_linear(b);

  switch (method) {
    case Method::Quadrature: {
      CorrelationResult r;
      r.method = Method::Quadrature;
      r.value = phase_space_expectation(state, la, lb, budget.quadrature);
      return r;
    }
    case Method::MonteCarlo:
      return monte_carlo(state, la, lb, budget);
    case Method::Orthant: {
      if (la.f != LinearFunction::Sign || lb.f != LinearFunction::Sign) {
        throw UnsupportedObservable("orthant path needs sign observables on both channels");
      }
      const Eigen::Matrix2d cov = linear_form_covariance(state, la.form, lb.form);
      return from_rho(cov(0, 1) / std::sqrt(cov(0, 0) * cov(1, 1)), Method::Orthant);
    }
    case Method::ClosedForm:
      break;
  }
  throw ContractViolation("correlator_numeric supports quadrature, Monte-Carlo and orthant methods");
}

bool within_std_errors(double diff, const CorrelationResult& mc, double k) {
  const double floor = mc.samples > 0 ? 1.0 / static_cast<double>(mc.samples) : 0.0;
  return std::abs(diff) <= k * std::max(mc.std_error, floor);
}

}  // namespace phasebell
