#include <iostream>

#include "acceptance.hpp"
#include "greenkernel/operator_symbols.hpp"

int main() {
  const auto results = greenkernel::acceptance::run_all(greenkernel::kDefaultSeed, false, &std::cout);
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::cout << (results.size() - failed) << '/' << results.size() << " acceptance criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
