#include "phasebell/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "phasebell/acceptance.hpp"
#include "phasebell/bell.hpp"
#include "phasebell/correlations.hpp"
#include "phasebell/errors.hpp"
#include "phasebell/fock_oracle.hpp"
#include "phasebell/observables.hpp"
#include "phasebell/superposition.hpp"

namespace phasebell::cli {
namespace {

constexpr double kQuadTolerance = 1e-6;
constexpr double kSpinTolerance = 1e-4;
constexpr double kPiTolerance = 5e-3;
// Fock sizes beyond these are reported as NA instead of computed.
constexpr int kMaxSpinTruncation = 2'000'000;
constexpr int kMaxPiTruncation = 600;
constexpr std::int64_t kScanSamples = 1'000'000;
constexpr std::int64_t kSuiteSamples = 10'000'000;

std::vector<double> default_zetas() { return {0.0, 0.25, 0.5, 1.0, 2.0, 5.0}; }

// zeta recovered from tau when only tau was given; nullopt at |tau| = 1.
std::optional<double> zeta_of(const Squeezing& sq) {
  if (sq.zeta()) return sq.zeta();
  if (std::abs(sq.tau()) >= 1.0) return std::nullopt;
  return 0.5 * std::atanh(sq.tau());
}

Cell optional_cell(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "NA";
        else if constexpr (std::is_same_v<T, double>) return format_number(v);
        else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return v;
      },
      c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
        else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
          // Round-trip through the printed form so JSON carries the same 12 digits.
          return std::stod(format_number(v));
        } else return v;
      },
      c);
}

QuadratureOptions quadrature_of(const RunConfig& config) {
  QuadratureOptions q;
  q.gauss_hermite_order = config.quad_order;
  return q;
}

TwoModeMap flow_of(const RunConfig& config, double t1, double t2) {
  return config.hamiltonian == "h0" ? TwoModeMap::harmonic(t1, t2) : TwoModeMap::free(t1, t2);
}

}  // namespace

Grid Grid::parse(const std::string& text) {
  Grid g;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> g.lo >> c1 >> g.hi >> c2 >> g.n) || c1 != ':' || c2 != ':' || !(in >> std::ws).eof()) {
    throw UsageError("grid must look like lo:hi:n, got '" + text + "'");
  }
  if (g.n < 1 || !std::isfinite(g.lo) || !std::isfinite(g.hi) || g.hi < g.lo) {
    throw UsageError("grid needs finite lo <= hi and n >= 1");
  }
  return g;
}

std::vector<double> Grid::values() const {
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = n == 1 ? lo : lo + (hi - lo) * k / (n - 1);
  return out;
}

void validate(const RunConfig& config) {
  if (config.zeta && config.tau) throw UsageError("give either --zeta or --tau, not both");
  if (config.zeta && !std::isfinite(*config.zeta)) throw UsageError("--zeta must be finite");
  if (config.tau && !(std::abs(*config.tau) < 1.0)) throw UsageError("--tau must lie in (-1, 1)");
  if (config.samples < 1000) throw UsageError("--samples must be at least 1000");
  if (config.fock_n < 16) throw UsageError("--fock-n must be at least 16");
  if (config.quad_order < 2) throw UsageError("--quad-order must be at least 2");
  if (config.hamiltonian != "h0" && config.hamiltonian != "hf") throw UsageError("--hamiltonian must be h0 or hf");
  if (!(config.box > 0.0) || config.grid_points < 2) throw UsageError("negativity scan needs box > 0 and >= 2 points");
}

Squeezing squeezing_of(const RunConfig& config, double fallback_zeta) {
  if (config.tau) return Squeezing::from_tau(*config.tau);
  return Squeezing::from_zeta(config.zeta.value_or(fallback_zeta));
}

SignConvention convention_of(const RunConfig& config) {
  return config.flip_sign_convention ? SignConvention::Flipped : SignConvention::EprCorrelated;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "NA";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // also folds -0
  return fmt::format("{:.12g}", v);
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out += (i ? "," : "") + csv_field(table.columns[i]);
  }
  out += "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_field(cell_text(row[i]));
    out += "\r\n";
  }
  return out;
}

std::string to_json(const Table& table) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = cell_json(row[i]);
    rows.push_back(obj);
  }
  return rows.dump(2) + "\n";
}

CommandResult cmd_scan_correlator(const RunConfig& config) {
  CommandResult res;
  res.table.columns = {"zeta",         "t1",   "t2",         "E_closed", "E_orthant", "E_mc", "stderr",
                       "max_disagreement", "E_quadrature", "P_pm", "chi", "tau", "flagged", "ok"};
  const Squeezing sq = squeezing_of(config);
  const SignConvention conv = convention_of(config);
  const GaussianState initial = tmss_state(sq, conv);
  const auto zeta = zeta_of(sq);
  const auto grid = config.theta_grid.values();
  std::uint64_t row_index = 0;
  for (double t1 : grid) {
    for (double t2 : grid) {
      const bool h0 = config.hamiltonian == "h0";
      const auto closed = h0 ? correlator_h0(sq, t1, t2) : correlator_hf(sq, t1, t2);
      const auto orth = h0 ? correlator_h0_orthant(sq, t1, t2, conv) : correlator_hf_orthant(sq, t1, t2, conv);
      const GaussianState state = evolve(initial, flow_of(config, t1, t2));
      NumericBudget budget;
      budget.samples = config.samples;
      budget.seed = config.seed + 0x9e37ULL * ++row_index;
      budget.quadrature = quadrature_of(config);
      const SignOfLinear a{Channel::One, 1.0, 0.0};
      const SignOfLinear b{Channel::Two, 1.0, 0.0};
      const auto quad = correlator_numeric(state, a, b, Method::Quadrature, budget);
      const auto mc = correlator_numeric(state, a, b, Method::MonteCarlo, budget);
      const double p_pm = orthant(marginal_qq(state).rho).p_pm;

      const double d_orth = std::abs(orth.value - closed.value);
      const double d_quad = std::abs(quad.value - closed.value);
      const double d_mc = std::abs(mc.value - closed.value);
      const bool ok = d_orth <= kQuadTolerance && d_quad <= kQuadTolerance && within_std_errors(d_mc, mc);
      res.pass = res.pass && ok;
      res.table.rows.push_back({optional_cell(zeta), t1, t2, closed.value, orth.value, mc.value, mc.std_error,
                                std::max({d_orth, d_quad, d_mc}), quad.value, p_pm, optional_cell(closed.chi),
                                sq.tau(), mc.flagged, ok});
      if (!ok) res.notes.push_back(fmt::format("gate failure at t1={} t2={}", t1, t2));
    }
  }
  return res;
}

CommandResult cmd_chsh(const RunConfig& config) {
  CommandResult res;
  res.table.columns = {"zeta",          "tau",       "h0_opt",        "hf_opt",  "spin_parity_opt",
                       "spin_parity_closed", "pi_fock_opt", "pi_closed", "classical_ok", "cirelson_ok",
                       "spin_parity_in_plane", "fock_n_spin", "fock_n_pi", "pi_fock_times", "ok"};
  std::vector<Squeezing> points;
  if (config.zeta || config.tau) {
    points.push_back(squeezing_of(config));
  } else {
    for (double z : default_zetas()) points.push_back(Squeezing::from_zeta(z));
  }

  for (const Squeezing& sq : points) {
    const auto zeta = zeta_of(sq);
    const auto h0 = bell::optimize_settings([&](double a, double b) { return correlator_h0(sq, a, b).value; },
                                            {0.0, 2.0 * M_PI, 0.0, 2.0 * M_PI});
    const auto hf = bell::optimize_settings([&](double a, double b) { return correlator_hf(sq, a, b).value; },
                                            {-10.0, 10.0, -10.0, 10.0});
    const bool classical_ok = h0.report.classical_ok && hf.report.classical_ok && h0.converged && hf.converged;
    std::vector<double> values = {h0.value, hf.value};
    bool ok = classical_ok;

    Cell spin = std::monostate{}, spin_closed = std::monostate{}, spin_plane = std::monostate{};
    Cell pi = std::monostate{}, pi_closed = std::monostate{}, pi_times = std::monostate{};
    Cell n_spin = std::monostate{}, n_pi = std::monostate{};
    if (zeta) {
      const double f = std::tanh(2.0 * *zeta);
      spin_closed = 2.0 * std::sqrt(1.0 + f * f);
      pi_closed = fock::pi_chsh_closed_form(*zeta);
      const int ns = std::max(config.fock_n, fock::required_truncation(*zeta, 1e-8));
      if (ns <= kMaxSpinTruncation) {
        const auto r = fock::spin_bell_max(*zeta, ns);
        spin = r.value;
        spin_plane = r.in_plane_value;
        n_spin = static_cast<std::int64_t>(ns);
        values.push_back(r.value);
        values.push_back(r.in_plane_value);
        ok = ok && std::abs(r.value - r.closed_form) <= kSpinTolerance;
      } else {
        res.notes.push_back(fmt::format("zeta={}: spin-parity truncation {} too large, reported NA", *zeta, ns));
      }
      const int np = std::max(config.fock_n, fock::required_truncation(*zeta, 1e-7));
      if (np <= kMaxPiTruncation) {
        const auto r = fock::pi_chsh_optimum(*zeta, np);
        pi = r.value;
        n_pi = static_cast<std::int64_t>(np);
        pi_times = fmt::format("{};{};{};{}", format_number(r.times.t1), format_number(r.times.t1p),
                               format_number(r.times.t2), format_number(r.times.t2p));
        values.push_back(r.value);
        ok = ok && std::abs(r.value - r.closed_form) <= kPiTolerance;
      } else {
        res.notes.push_back(fmt::format("zeta={}: Pi truncation {} too large, reported NA", *zeta, np));
      }
    } else {
      res.notes.push_back("tau = 1 has no finite zeta; Fock columns reported NA");
    }
    bool cirelson_ok = true;
    for (double v : values) cirelson_ok = cirelson_ok && std::abs(v) <= bell::kCirelson + bell::kBoundTolerance;
    ok = ok && cirelson_ok;
    res.pass = res.pass && ok;
    res.table.rows.push_back({optional_cell(zeta), sq.tau(), h0.value, hf.value, spin, spin_closed, pi, pi_closed,
                              classical_ok, cirelson_ok, spin_plane, n_spin, n_pi, pi_times, ok});
  }
  return res;
}

CommandResult cmd_classify(const RunConfig&) {
  CommandResult res;
  res.table.columns = {"variable", "proper", "bounded", "representative", "spectrum", "reason"};
  const DynamicalVariable catalog[] = {SignOfLinear{}, FunctionOfLinear{}, ParityZ{}, ParityYSingular{},
                                       QuadraticHO{}};
  for (const auto& dv : catalog) {
    const auto r = classify(dv);
    std::string spectrum;
    switch (r.spectrum.kind) {
      case SpectrumDescriptor::Kind::TwoPoint: spectrum = "{-1, +1}"; break;
      case SpectrumDescriptor::Kind::Interval: spectrum = "[-1, 1]"; break;
      case SpectrumDescriptor::Kind::HalfIntegerLadder: spectrum = "{n + 1/2}"; break;
    }
    res.table.rows.push_back({name_of(dv), r.proper, r.bounded, r.representative, spectrum, r.reason});
  }
  return res;
}

CommandResult cmd_negativity(const RunConfig& config) {
  CommandResult res;
  res.table.columns = {"gamma", "zeta", "q1", "q2", "p1", "p2", "min_value", "refined_min", "negative", "terms", "ok"};
  const auto zeta = zeta_of(squeezing_of(config));
  if (!zeta) throw UsageError("negativity needs a finite squeezing");
  const auto state = rotated_state(*zeta, config.gamma);
  const auto grid_min = min_wigner_scan(state, config.box, config.grid_points);
  const auto refined = refine_minimum(state, grid_min, config.box / (config.grid_points - 1));
  const bool negative = grid_min.value < 0.0;
  const auto terms = static_cast<std::int64_t>(state.terms().size());
  // Pure Gaussian states are non-negative everywhere; a genuine two-term
  // superposition is not.
  const bool ok = negative == (terms == 2);
  res.pass = ok;
  if (!negative && terms == 2) res.notes.push_back("two-term superposition but the grid found no negative value");
  res.table.rows.push_back({config.gamma, *zeta, grid_min.point.q1, grid_min.point.q2, grid_min.point.p1,
                            grid_min.point.p2, grid_min.value, refined.value, negative, terms, ok});
  return res;
}

CommandResult cmd_fock_verify(const RunConfig& config) {
  CommandResult res;
  res.table.columns = {"check", "value", "expected", "error", "tolerance", "ok"};
  const auto zeta = zeta_of(squeezing_of(config));
  if (!zeta) throw UsageError("fock-verify needs a finite squeezing");
  const double z = *zeta;
  const int n = config.fock_n;
  auto add = [&res](const std::string& name, double value, double expected, double tol) {
    const double err = std::abs(value - expected);
    const bool ok = err <= tol;
    res.pass = res.pass && ok;
    res.table.rows.push_back({name, value, expected, err, tol, ok});
  };

  const auto amps = fock::tmss_coeffs(z, n);
  if (amps.truncation_warning) res.notes.push_back(amps.warning);
  double sum = 0.0;
  for (double c : amps.coeffs) sum += c * c;
  add("norm_deficit", 1.0 - sum, amps.norm_deficit, 1e-14);
  add("norm_deficit_within_tail_bound", amps.norm_deficit <= amps.tail_bound ? 1.0 : 0.0, 1.0, 0.0);

  const auto corr = fock::parity_correlator(z, n);
  add("sx_sx", corr.sx_sx, std::tanh(2.0 * z), 1e-8 + amps.tail_bound);
  add("sz_sz", corr.sz_sz, 1.0, 1e-12 + amps.norm_deficit);

  const int dense_n = std::min(n, 200);
  const auto s = fock::parity_matrices(dense_n);
  double dual = 0.0;
  for (double th : {0.3, M_PI / 2, 2.0}) {
    dual = std::max(dual, (fock::rotated_parity(s, th) - fock::rotated_parity_expm(s, th)).cwiseAbs().maxCoeff());
  }
  add("rotated_parity_dual_path", dual, 0.0, 1e-10);
  {
    const int paired = dense_n % 2 ? dense_n + 1 : dense_n;
    const Eigen::MatrixXcd x(s.sx), y(s.sy), zz(s.sz);
    const Eigen::MatrixXcd comm = (x * y - y * x - fock::cplx(0.0, 2.0) * zz).topLeftCorner(paired, paired);
    add("su2_commutator_interior", comm.cwiseAbs().maxCoeff(), 0.0, 1e-14);
  }
  const auto spin = fock::spin_bell_max(z, n);
  add("spin_bell_max", spin.value, spin.closed_form, kSpinTolerance);
  add("overlap_series", fock::overlap_series(z, std::max(n, 400)), 1.0 / std::cosh(2.0 * z), 1e-12);

  const int np = std::max(n, fock::required_truncation(z, 1e-7));
  if (np <= kMaxPiTruncation) {
    const auto ops = fock::pi_operators(np);
    add("pi_x_01", ops.x(0, 1), std::sqrt(2.0 / M_PI), 1e-12);
    const auto pi = fock::pi_chsh_optimum(fock::tmss_coeffs(z, np), ops);
    add("pi_chsh_optimum", pi.value, pi.closed_form, kPiTolerance);
  } else {
    res.notes.push_back(fmt::format("Pi checks skipped: truncation {} needed", np));
  }
  return res;
}

CommandResult cmd_reproduce_all(const RunConfig& config) {
  CommandResult res;
  res.table.columns = {"criterion", "name", "pass", "detail"};
  acceptance::SuiteOptions opts;
  opts.samples = config.samples;
  opts.seed = config.seed;
  opts.fock_n = config.fock_n;
  opts.flip_sign_convention = config.flip_sign_convention;
  for (const auto& r : acceptance::run_acceptance(opts)) {
    res.pass = res.pass && r.pass;
    res.table.rows.push_back({static_cast<std::int64_t>(r.id), r.name, r.pass, r.detail});
    res.notes.push_back(acceptance::format_line(r));
  }
  return res;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phase-space CHSH correlation engine"};
  app.set_config("--config", "", "key=value file; command-line flags take precedence");
  app.require_subcommand(1);

  RunConfig config;
  double zeta = 0.0, tau = 0.0;
  std::string theta_grid = "0:2:5", format = "csv", out_path;
  std::int64_t samples = 0;

  // Options live on the top-level app; subcommands fall through to them so
  // they may appear before or after the command name.
  app.add_option("--hamiltonian", config.hamiltonian, "h0 (oscillator) or hf (free)")
      ->check(CLI::IsMember({"h0", "hf"}));
  auto* zeta_opt = app.add_option("--zeta", zeta, "squeezing parameter");
  auto* tau_opt = app.add_option("--tau", tau, "tanh(2 zeta), for the EPR limit");
  zeta_opt->excludes(tau_opt);
  app.add_option("--theta-grid", theta_grid, "time grid lo:hi:n for t1 and t2");
  auto* samples_opt = app.add_option("--samples", samples, "Monte-Carlo samples");
  app.add_option("--seed", config.seed, "Monte-Carlo seed");
  app.add_option("--quad-order", config.quad_order, "Gauss-Hermite order for smooth integrands");
  app.add_option("--fock-n", config.fock_n, "Fock truncation N");
  app.add_option("--out", out_path, "output file (default stdout)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--flip-sign-convention", config.flip_sign_convention, "flip the q1q2/p1p2 cross-term sign");
  app.add_option("--gamma", config.gamma, "negativity: superposition angle");
  app.add_option("--box", config.box, "negativity: scan half-width");
  app.add_option("--grid-points", config.grid_points, "negativity: points per axis");

  const std::pair<const char*, const char*> commands[] = {
      {"scan-correlator", "tabulate E(t1, t2) by every method"},
      {"chsh-scan", "optimized CHSH values per squeezing"},
      {"classify", "properness of the observable catalog"},
      {"negativity", "Wigner negativity of cos(gamma)|zeta> + sin(gamma)|-zeta>"},
      {"fock-verify", "Fock-space oracle checks"},
      {"reproduce-all", "run every acceptance criterion"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  config.command = app.get_subcommands().front()->get_name();
  if (zeta_opt->count()) config.zeta = zeta;
  if (tau_opt->count()) config.tau = tau;
  config.format = format == "json" ? Format::Json : Format::Csv;
  if (!out_path.empty()) config.out = out_path;
  const bool suite = config.command == "reproduce-all";
  config.samples = samples_opt->count() ? samples : (suite ? kSuiteSamples : kScanSamples);

  CommandResult result;
  try {
    config.theta_grid = Grid::parse(theta_grid);
    validate(config);
    if (config.command == "scan-correlator") result = cmd_scan_correlator(config);
    else if (config.command == "chsh-scan") result = cmd_chsh(config);
    else if (config.command == "classify") result = cmd_classify(config);
    else if (config.command == "negativity") result = cmd_negativity(config);
    else if (config.command == "fock-verify") result = cmd_fock_verify(config);
    else result = cmd_reproduce_all(config);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  const std::string text = config.format == Format::Json ? to_json(result.table) : to_csv(result.table);
  if (config.out) {
    std::ofstream file(*config.out, std::ios::binary);
    if (!file) {
      err << "usage error: cannot write " << *config.out << "\n";
      return 2;
    }
    file << text;
  } else {
    out << text;
  }
  for (const auto& note : result.notes) err << note << "\n";
  return result.pass ? 0 : 1;
}

}  // namespace phasebell::cli
