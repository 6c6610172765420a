#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sdns {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the nine acceptance criteria in order, printing one
/// "[PASS]/[FAIL] <index> <name>" line per criterion to `out` as it goes.
/// Scratch output lands in a temporary directory and is removed.
std::vector<CriterionResult> run_acceptance_suite(std::ostream& out);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace sdns
