#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace phasebell::acceptance {

struct SuiteOptions {
  std::int64_t samples = 10'000'000;
  std::uint64_t seed = 20240601;
  int fock_n = 200;
  bool flip_sign_convention = false;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the twelve end-to-end criteria in order. Every CHSH value computed
/// along the way is collected and checked against 2 sqrt 2 by criterion 9.
std::vector<CriterionResult> run_acceptance(const SuiteOptions& options = {});

/// "PASS [01] name: detail (1.23 s)"
std::string format_line(const CriterionResult& r);

}  // namespace phasebell::acceptance
