#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bifcurrent/parallel.hpp"

namespace bifcurrent {

struct AcceptanceOptions {
  std::uint64_t seed = 42;
  std::string outdir;  // artifacts written here when non-empty
  par::Exec exec = par::Exec::Parallel;
};

struct CriterionResult {
  int id = 0;
  std::string label;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs verification criteria 1-9 (the tenth, byte-level determinism, is
// exercised end-to-end against the CLI by the acceptance test binary).
std::vector<CriterionResult> run_acceptance_suite(const AcceptanceOptions& options);

bool all_pass(const std::vector<CriterionResult>& results);

std::string format_result_line(const CriterionResult& r);

}  // namespace bifcurrent
