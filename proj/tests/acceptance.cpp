#include <iostream>

#include "phasebell/acceptance.hpp"

int main() {
  int failed = 0;
  for (const auto& r : phasebell::acceptance::run_acceptance()) {
    std::cout << phasebell::acceptance::format_line(r) << std::endl;
    if (!r.pass) ++failed;
  }
  std::cout << (failed ? "FAILED " : "ALL PASS ") << "(" << failed << " failing)" << std::endl;
  return failed ? 1 : 0;
}
