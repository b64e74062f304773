#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "phasebell/bell.hpp"
#include "phasebell/correlations.hpp"
#include "phasebell/errors.hpp"
#include "phasebell/fock_oracle.hpp"
#include "phasebell/superposition.hpp"

namespace py = pybind11;
using namespace phasebell;

namespace {

Squeezing squeezing(std::optional<double> zeta, std::optional<double> tau) {
  if (zeta.has_value() == tau.has_value()) throw py::value_error("pass exactly one of zeta or tau");
  return zeta ? Squeezing::from_zeta(*zeta) : Squeezing::from_tau(*tau);
}

TwoModeMap flow(const std::string& hamiltonian, double t1, double t2) {
  if (hamiltonian == "h0") return TwoModeMap::harmonic(t1, t2);
  if (hamiltonian == "hf") return TwoModeMap::free(t1, t2);
  throw py::value_error("hamiltonian must be 'h0' or 'hf'");
}

py::dict as_dict(const CorrelationResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["method"] = to_string(r.method);
  d["std_error"] = r.std_error;
  d["samples"] = r.samples;
  d["chi"] = r.chi ? py::cast(*r.chi) : py::none();
  d["flagged"] = r.flagged;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Phase-space CHSH correlations of the two-mode squeezed vacuum.";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
  py::register_exception<UnsupportedObservable>(m, "UnsupportedObservable", PyExc_TypeError);
  py::register_exception<NotConverged>(m, "NotConverged", PyExc_RuntimeError);
  py::register_exception<TruncationError>(m, "TruncationError", PyExc_RuntimeError);

  m.def(
      "correlator",
      [](const std::string& hamiltonian, double t1, double t2, std::optional<double> zeta,
         std::optional<double> tau, const std::string& method, std::int64_t samples, std::uint64_t seed) {
        const Squeezing sq = squeezing(zeta, tau);
        const TwoModeMap map = flow(hamiltonian, t1, t2);
        if (method == "closed") {
          return as_dict(hamiltonian == "h0" ? correlator_h0(sq, t1, t2) : correlator_hf(sq, t1, t2));
        }
        if (method == "orthant") {
          return as_dict(hamiltonian == "h0" ? correlator_h0_orthant(sq, t1, t2) : correlator_hf_orthant(sq, t1, t2));
        }
        NumericBudget budget;
        budget.samples = samples;
        budget.seed = seed;
        const GaussianState state = evolve(tmss_state(sq), map);
        const SignOfLinear a{Channel::One, 1.0, 0.0};
        const SignOfLinear b{Channel::Two, 1.0, 0.0};
        if (method == "quadrature") return as_dict(correlator_numeric(state, a, b, Method::Quadrature, budget));
        if (method == "mc") return as_dict(correlator_numeric(state, a, b, Method::MonteCarlo, budget));
        throw py::value_error("method must be closed, orthant, quadrature or mc");
      },
      py::arg("hamiltonian"), py::arg("t1"), py::arg("t2"), py::kw_only(), py::arg("zeta") = py::none(),
      py::arg("tau") = py::none(), py::arg("method") = "closed", py::arg("samples") = 1'000'000,
      py::arg("seed") = 20240601,
      "E(t1, t2) for sgn q1 and sgn q2 after evolution under h0 or hf.");

  m.def(
      "orthant",
      [](double rho) {
        const auto p = orthant(rho);
        return py::make_tuple(p.p_pp, p.p_pm, p.p_mp, p.p_mm);
      },
      py::arg("rho"), "(P++, P+-, P-+, P--) for a bivariate normal with correlation rho.");

  m.def(
      "tmss_form",
      [](std::optional<double> zeta, std::optional<double> tau, bool flipped) -> Eigen::Matrix4d {
        return tmss_state(squeezing(zeta, tau), flipped ? SignConvention::Flipped : SignConvention::EprCorrelated)
            .form();
      },
      py::kw_only(), py::arg("zeta") = py::none(), py::arg("tau") = py::none(), py::arg("flipped") = false,
      "Quadratic form M of W = exp(-x^T M x) / pi^2, x = (q1, q2, p1, p2).");

  m.def(
      "evolved_covariance",
      [](const std::string& hamiltonian, double t1, double t2, std::optional<double> zeta,
         std::optional<double> tau) -> Eigen::Matrix4d {
        return evolved_covariance(tmss_state(squeezing(zeta, tau)), flow(hamiltonian, t1, t2));
      },
      py::arg("hamiltonian"), py::arg("t1"), py::arg("t2"), py::kw_only(), py::arg("zeta") = py::none(),
      py::arg("tau") = py::none());

  m.def(
      "chsh_optimum",
      [](const std::string& hamiltonian, double zeta) {
        const auto sq = Squeezing::from_zeta(zeta);
        flow(hamiltonian, 0.0, 0.0);
        const bool h0 = hamiltonian == "h0";
        const bell::SearchBox box = h0 ? bell::SearchBox{} : bell::SearchBox{-10.0, 10.0, -10.0, 10.0};
        const auto r = bell::optimize_settings(
            [&](double a, double b) { return h0 ? correlator_h0(sq, a, b).value : correlator_hf(sq, a, b).value; },
            box);
        const auto& s = r.settings;
        return py::make_tuple(r.value, py::make_tuple(s.t1, s.t1p, s.t2, s.t2p));
      },
      py::arg("hamiltonian"), py::arg("zeta"), "Largest attained |CHSH| and the times (t1, t1', t2, t2').");

  m.def(
      "spin_bell_max",
      [](double zeta, int n) {
        const auto r = fock::spin_bell_max(zeta, n);
        return py::make_tuple(r.value, r.closed_form);
      },
      py::arg("zeta"), py::arg("truncation") = 200, "(optimum, 2 sqrt(1 + tanh^2 2 zeta)) in the Fock basis.");

  m.def(
      "pi_chsh_optimum",
      [](double zeta, int n) {
        const auto r = fock::pi_chsh_optimum(zeta, n);
        return py::make_tuple(r.value, r.closed_form);
      },
      py::arg("zeta"), py::arg("truncation") = 200);

  m.def("pi_chsh_closed_form", &fock::pi_chsh_closed_form, py::arg("zeta"));
  m.def("required_truncation", &fock::required_truncation, py::arg("zeta"), py::arg("accuracy"));

  m.def(
      "wigner_min",
      [](double zeta, double gamma, double box, int grid_points) {
        const auto state = rotated_state(zeta, gamma);
        const auto r = min_wigner_scan(state, box, grid_points);
        const auto& p = r.point;
        return py::make_tuple(r.value, py::make_tuple(p.q1, p.q2, p.p1, p.p2));
      },
      py::arg("zeta"), py::arg("gamma"), py::arg("box") = 4.0, py::arg("grid_points") = 21,
      "Grid minimum of the Wigner function of cos(gamma)|zeta> + sin(gamma)|-zeta>.");

  m.def("wedge", [](double zeta, double theta) { return bell::wedge_inequality(Squeezing::from_zeta(zeta), theta); },
        py::arg("zeta"), py::arg("theta"), "3 P+-(theta) - P+-(3 theta).");
}
