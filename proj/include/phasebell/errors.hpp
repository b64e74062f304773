#pragma once

#include <stdexcept>
#include <string>

namespace phasebell {

// Non-finite or out-of-range numeric input (|rho| > 1, NaN squeeze, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A value type invariant was broken by the caller (non-canonical map,
// indefinite quadratic form, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The observable has no pointwise phase-space representative that takes
// its eigenvalues, so it cannot enter a hidden-variable average.
class UnsupportedObservable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnsupportedTransform : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotConverged : public std::runtime_error {
 public:
  NotConverged(const std::string& what, double best) : std::runtime_error(what), best_(best) {}
  double best() const noexcept { return best_; }

 private:
  double best_;
};

// Fock truncation or coordinate grid too coarse for the requested accuracy.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace phasebell
