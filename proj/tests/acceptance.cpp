#include <iostream>

#include "logsurf/verify.hpp"

// One line per acceptance criterion; nonzero exit if any fails.
int main() {
  const auto report = logsurf::run_checks({});
  for (const auto& c : report.checks) std::cout << "criterion " << c.id.substr(1) << ": " << logsurf::format_line(c) << "\n";
  std::cout << (report.all_pass() ? "acceptance: all criteria pass" : "acceptance: FAILED") << std::endl;
  return report.all_pass() ? 0 : 1;
}
