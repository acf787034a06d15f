#pragma once

// The acceptance suite: every criterion is pinned here, at its stated
// tolerance and workload, and reported as a pass/fail line. The CLI selftest
// subcommand and the acceptance test binary both run exactly this code.

#include <cstdint>
#include <string>
#include <vector>

namespace crpt::selftest {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

struct Options {
  std::uint64_t seed = 20260810;
  int threads = 1;
  // workload divider for smoke runs; 1 = the full stated counts
  int reduction = 1;
};

CriterionResult run_criterion(int id, const Options& opts);
std::vector<CriterionResult> run_all(const Options& opts);

std::string summary_json(const std::vector<CriterionResult>& rs);

} // namespace crpt::selftest
