#pragma once

#include <string>
#include <vector>

namespace hmn::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Runs one CLI invocation; args[0] is the program name. Errors are reported
// on stderr and turned into exit status 1.
int run(const std::vector<std::string>& args);

}  // namespace hmn::cli
