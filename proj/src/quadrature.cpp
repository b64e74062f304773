#include "phasebell/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>

#include "phasebell/errors.hpp"

namespace phasebell::quad {
namespace {

// Golub-Welsch: nodes are eigenvalues of the symmetric Jacobi matrix, weights
// are mu0 * (first eigenvector component)^2.
Rule golub_welsch(int order, double mu0, double (*offdiag)(int)) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double beta = offdiag(k);
    jacobi(k - 1, k) = beta;
    jacobi(k, k - 1) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  Rule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  // Symmetrize: both families are even, and exact symmetry keeps odd
  // integrands at exactly zero.
  for (int i = 0, j = order - 1; i < j; ++i, --j) {
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

double hermite_beta(int k) { return std::sqrt(0.5 * k); }
double legendre_beta(int k) { return k / std::sqrt(4.0 * k * k - 1.0); }

const Rule& cached(std::map<int, Rule>& cache, std::mutex& mu, int order, double mu0,
                   double (*beta)(int)) {
  if (order < 1) throw DomainError("quadrature order must be positive");
  std::lock_guard lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, golub_welsch(order, mu0, beta)).first;
  return it->second;
}

}  // namespace

const Rule& gauss_hermite(int order) {
  static std::map<int, Rule> cache;
  static std::mutex mu;
  return cached(cache, mu, order, std::sqrt(M_PI), hermite_beta);
}

const Rule& gauss_legendre(int order) {
  static std::map<int, Rule> cache;
  static std::mutex mu;
  return cached(cache, mu, order, 2.0, legendre_beta);
}

Rule standard_normal(int order) {
  const Rule& gh = gauss_hermite(order);
  Rule out;
  out.nodes.resize(gh.size());
  out.weights.resize(gh.size());
  const double scale = 1.0 / std::sqrt(M_PI);
  for (std::size_t i = 0; i < gh.size(); ++i) {
    out.nodes[i] = std::sqrt(2.0) * gh.nodes[i];
    out.weights[i] = scale * gh.weights[i];
  }
  return out;
}

Rule graded_interval(double from, double to, int panels, int order) {
  const Rule& gl = gauss_legendre(order);
  Rule out;
  out.nodes.reserve(static_cast<std::size_t>(panels) * gl.size());
  out.weights.reserve(out.nodes.capacity());
  const double length = to - from;
  for (int k = 0; k < panels; ++k) {
    const double s0 = static_cast<double>(k) / panels;
    const double s1 = static_cast<double>(k + 1) / panels;
    const double a = from + length * s0 * s0;
    const double b = from + length * s1 * s1;
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (std::size_t i = 0; i < gl.size(); ++i) {
      out.nodes.push_back(mid + half * gl.nodes[i]);
      out.weights.push_back(std::abs(half) * gl.weights[i]);
    }
  }
  return out;
}

Rule standard_normal_split(double split, const SplitOptions& opts) {
  return standard_normal_split(split, opts, 0.0);
}

Rule standard_normal_split(double split, const SplitOptions& opts, double feature_width) {
  Rule out;
  auto append = [&](double from, double to) {
    if (!(std::abs(to - from) > 0.0)) return;
    Rule part = graded_interval(from, to, opts.panels, opts.order);
    for (std::size_t i = 0; i < part.size(); ++i) {
      out.nodes.push_back(part.nodes[i]);
      out.weights.push_back(part.weights[i] * normal_pdf(part.nodes[i]));
    }
  };
  // From the split out to `end`, with an extra break one feature width away.
  auto side = [&](double end) {
    const double w = std::copysign(feature_width, end - split);
    if (feature_width > 0.0 && std::abs(w) < std::abs(end - split)) {
      append(split, split + w);
      append(split + w, end);
    } else {
      append(split, end);
    }
  };
  const double lo = -opts.reach;
  const double hi = opts.reach;
  if (split <= lo) {
    append(lo, hi);
  } else if (split >= hi) {
    append(hi, lo);
  } else {
    side(lo);
    side(hi);
  }
  return out;
}

}  // namespace phasebell::quad
