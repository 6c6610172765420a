// Acceptance gate: runs the full criteria suite and exits nonzero if any
// criterion fails. One [PASS]/[FAIL] line is printed per criterion.

#include <iostream>

#include "sdns/types.hpp"
#include "sdns/verification.hpp"

int main() {
  std::cout << "sdns acceptance suite (" << sdns::version() << ")\n";
  const auto results = sdns::run_acceptance_suite(std::cout);
  const bool ok = sdns::all_passed(results);
  int failed = 0;
  for (const auto& r : results)
    if (!r.passed) ++failed;
  std::cout << (ok ? "ALL CRITERIA PASSED"
                   : std::to_string(failed) + " CRITERIA FAILED")
            << " (" << results.size() << " total)" << std::endl;
  return ok ? 0 : 1;
}
