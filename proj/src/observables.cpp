#include "phasebell/observables.hpp"

#include <cmath>
#include <limits>

#include "phasebell/errors.hpp"

namespace phasebell {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_linear(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("linear coefficients must be finite");
  if (a == 0.0 && b == 0.0) throw ContractViolation("linear observable needs (a, b) != (0, 0)");
}

std::pair<double, double> channel_coords(Channel ch, const PhasePoint& x) {
  return ch == Channel::One ? std::pair{x.q1, x.p1} : std::pair{x.q2, x.p2};
}

Eigen::Vector4d covector(Channel ch, double a, double b) {
  Eigen::Vector4d g = Eigen::Vector4d::Zero();
  g(ch == Channel::One ? kQ1 : kQ2) = a;
  g(ch == Channel::One ? kP1 : kP2) = b;
  return g;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

Representative wigner_rep(const DynamicalVariable& dv, const PhasePoint& x) {
  if (!x.vec().allFinite()) throw DomainError("phase point must be finite");
  return std::visit(
      overloaded{
          [&](const SignOfLinear& s) -> Representative {
            check_linear(s.a, s.b);
            const auto [q, p] = channel_coords(s.channel, x);
            return sign_of(s.a * q + s.b * p);
          },
          [&](const FunctionOfLinear& f) -> Representative {
            check_linear(f.a, f.b);
            const auto [q, p] = channel_coords(f.channel, x);
            return apply(f.f, f.a * q + f.b * p);
          },
          [](const ParityZ&) -> Representative { return Singular{"-pi delta(q) delta(p)"}; },
          [](const ParityYSingular&) -> Representative { return Singular{"-delta(q) PV(1/p)"}; },
          [&](const QuadraticHO& h) -> Representative {
            const auto [q, p] = channel_coords(h.channel, x);
            return 0.5 * (p * p + q * q);
          },
      },
      dv);
}

DynamicalVariable transform_dv(const DynamicalVariable& dv, const SymplecticMap& m) {
  auto compose = [&](double a, double b) {
    return std::pair{a * m.a() + b * m.c(), a * m.b() + b * m.d()};
  };
  return std::visit(
      overloaded{
          [&](const SignOfLinear& s) -> DynamicalVariable {
            check_linear(s.a, s.b);
            const auto [a, b] = compose(s.a, s.b);
            return SignOfLinear{s.channel, a, b};
          },
          [&](const FunctionOfLinear& f) -> DynamicalVariable {
            check_linear(f.a, f.b);
            const auto [a, b] = compose(f.a, f.b);
            return FunctionOfLinear{f.channel, a, b, f.f};
          },
          [&](const auto& other) -> DynamicalVariable {
            throw UnsupportedTransform("no catalog representative for the evolved " + name_of(other));
          },
      },
      dv);
}

ClassificationReport classify(const DynamicalVariable& dv) {
  using Kind = SpectrumDescriptor::Kind;
  return std::visit(
      overloaded{
          [](const SignOfLinear&) {
            return ClassificationReport{
                true, true, "representative sgn(a q + b p) takes only the eigenvalues +1 and -1",
                {Kind::TwoPoint, -1.0, 1.0}, true, -1.0, 1.0, "sgn(a q + b p)"};
          },
          [](const FunctionOfLinear& f) {
            if (f.f == LinearFunction::Sign) {
              return ClassificationReport{
                  true, true, "representative sgn(a q + b p) takes only the eigenvalues +1 and -1",
                  {Kind::TwoPoint, -1.0, 1.0}, true, -1.0, 1.0, "sgn(a q + b p)"};
            }
            return ClassificationReport{
                true, true, "representative tanh(a q + b p) ranges over the spectrum [-1, 1] and its powers "
                            "represent the operator powers",
                {Kind::Interval, -1.0, 1.0}, true, -1.0, 1.0, "tanh(a q + b p)"};
          },
          [](const ParityZ&) {
            return ClassificationReport{
                false, false, "representative -pi delta(q) delta(p) is not an eigenvalue (+1 or -1) and is unbounded",
                {Kind::TwoPoint, -1.0, 1.0}, false, -kInf, 0.0, "-pi delta(q) delta(p)"};
          },
          [](const ParityYSingular&) {
            return ClassificationReport{
                false, false, "representative -delta(q) PV(1/p) is distributional and unbounded",
                {Kind::TwoPoint, -1.0, 1.0}, false, -kInf, kInf, "-delta(q) PV(1/p)"};
          },
          [](const QuadraticHO&) {
            return ClassificationReport{
                false, false, "representative (p^2 + q^2)/2 takes every value in [0, inf), not only n + 1/2",
                {Kind::HalfIntegerLadder, 0.5, kInf}, true, 0.0, kInf, "(p^2 + q^2)/2"};
          },
      },
      dv);
}

std::string name_of(const DynamicalVariable& dv) {
  return std::visit(overloaded{
                        [](const SignOfLinear&) { return std::string("SignOfLinear"); },
                        [](const FunctionOfLinear& f) {
                          return std::string(f.f == LinearFunction::Tanh ? "FunctionOfLinear(tanh)"
                                                                         : "FunctionOfLinear(sgn)");
                        },
                        [](const ParityZ&) { return std::string("ParityZ"); },
                        [](const ParityYSingular&) { return std::string("ParityYSingular"); },
                        [](const QuadraticHO&) { return std::string("QuadraticHO"); },
                    },
                    dv);
}

Channel channel_of(const DynamicalVariable& dv) {
  return std::visit([](const auto& v) { return v.channel; }, dv);
}

LinearObservable as_linear(const DynamicalVariable& dv) {
  return std::visit(overloaded{
                        [](const SignOfLinear& s) {
                          check_linear(s.a, s.b);
                          return LinearObservable{covector(s.channel, s.a, s.b), LinearFunction::Sign, 1};
                        },
                        [](const FunctionOfLinear& f) {
                          check_linear(f.a, f.b);
                          return LinearObservable{covector(f.channel, f.a, f.b), f.f, 1};
                        },
                        [&](const auto& other) -> LinearObservable {
                          throw UnsupportedObservable(name_of(other) +
                                                      " has no eigenvalue-valued phase-space representative");
                        },
                    },
                    dv);
}

double nondispersive_check(const DynamicalVariable& dv, const GaussianState& state, int k,
                           const QuadratureOptions& opts) {
  if (k < 2 || k > 4) throw DomainError("nondispersive check supports powers 2, 3 and 4");
  if (!classify(dv).proper) throw UnsupportedObservable(name_of(dv) + " is not a proper dynamical variable");
  LinearObservable obs = as_linear(dv);

  // Operator side: f(u)^k by spectral calculus, averaged over the quadrature's
  // distribution N(0, g^T Sigma g).
  const double sigma = std::sqrt(linear_form_covariance(state, obs.form, obs.form)(0, 0));
  double operator_side = 0.0;
  if (obs.f == LinearFunction::Sign) {
    // sgn(u)^2 = 1 as an operator identity on the +-1 spectrum.
    if (k % 2 == 0) {
      operator_side = 1.0;
    } else {
      const quad::Rule rule = quad::standard_normal_split(0.0, opts.split);
      operator_side = rule.integrate([&](double y) { return sign_of(sigma * y); });
    }
  } else {
    const quad::Rule rule = quad::standard_normal(opts.gauss_hermite_order);
    operator_side = rule.integrate([&](double y) { return apply_power(obs.f, sigma * y, k); });
  }

  obs.power = k;
  const double phase_side = phase_space_expectation(state, obs, opts);
  return std::abs(operator_side - phase_side);
}

}  // namespace phasebell
