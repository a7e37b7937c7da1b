#pragma once

// Statistical acceptance suite: eleven oracle- and property-based criteria
// run at desk scale, one pass/fail line each. Every tolerance is pinned here.

#include <cstdio>
#include <string>
#include <vector>

namespace fluctlab {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

int acceptance_criterion_count();
CriterionResult run_acceptance_criterion(int index, int threads);

// Runs all criteria, printing "[PASS]/[FAIL] criterion k: name -- detail"
// per criterion to `stream` (may be null).
std::vector<CriterionResult> run_acceptance_suite(int threads, std::FILE* stream);

}  // namespace fluctlab
