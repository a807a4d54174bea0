#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace greenkernel::cli {

// Exit codes: 0 success, 1 validation error, 2 numerical failure or
// tolerance breach.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace greenkernel::cli
