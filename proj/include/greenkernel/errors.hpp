#pragma once

#include <stdexcept>
#include <string>

namespace greenkernel {

// Bad input: unknown names, invalid parameters, malformed files, degenerate
// point sets. The CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation ran but its result cannot be trusted: singular systems,
// derivative singularities, tolerance breaches. The CLI maps this to exit
// code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace greenkernel
