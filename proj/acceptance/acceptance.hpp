#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace greenkernel::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double measured = 0.0;   // worst observed value of the criterion's metric
  double threshold = 0.0;  // bound the metric is compared against
  double seconds = 0.0;
  std::string detail;
};

// Runs acceptance criteria 1-10 in order. With fail_fast the run stops after
// the first failing criterion. Each finished criterion is also printed as
// one line to `log` when given.
std::vector<CriterionResult> run_all(std::uint64_t seed, bool fail_fast, std::ostream* log = nullptr);

std::string format_line(const CriterionResult& r);

}  // namespace greenkernel::acceptance
