#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "phasebell/phase_space.hpp"

namespace phasebell::cli {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Format { Csv, Json };

/// lo:hi:n, n evenly spaced points including both ends.
struct Grid {
  double lo = 0.0;
  double hi = 2.0;
  int n = 5;

  static Grid parse(const std::string& text);
  std::vector<double> values() const;
};

struct RunConfig {
  std::string command;
  std::string hamiltonian = "h0";
  std::optional<double> zeta;
  std::optional<double> tau;
  Grid theta_grid{};
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 20240601;
  int quad_order = 64;
  int fock_n = 200;
  std::optional<std::string> out;
  Format format = Format::Csv;
  bool flip_sign_convention = false;
  double gamma = M_PI / 4;
  double box = 4.0;
  int grid_points = 21;
};

/// Throws UsageError for broken invariants.
void validate(const RunConfig& config);

/// Squeezing from --zeta or --tau, `fallback_zeta` when neither is set.
Squeezing squeezing_of(const RunConfig& config, double fallback_zeta = 0.5);

SignConvention convention_of(const RunConfig& config);

/// Table cell; monostate renders as NA in CSV and null in JSON.
using Cell = std::variant<std::monostate, double, std::int64_t, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// 12 significant digits, ties to even.
std::string format_number(double v);
std::string to_csv(const Table& table);
std::string to_json(const Table& table);

struct CommandResult {
  Table table;
  bool pass = true;
  std::vector<std::string> notes;  // printed to stderr
};

CommandResult cmd_scan_correlator(const RunConfig& config);
CommandResult cmd_chsh(const RunConfig& config);
CommandResult cmd_classify(const RunConfig& config);
CommandResult cmd_negativity(const RunConfig& config);
CommandResult cmd_fock_verify(const RunConfig& config);
CommandResult cmd_reproduce_all(const RunConfig& config);

/// Full command line: parses, dispatches, writes the table. Returns the exit
/// code: 0 pass, 1 gate failure, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace phasebell::cli
