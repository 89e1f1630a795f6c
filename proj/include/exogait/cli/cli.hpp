#pragma once

#include <string>
#include <vector>

namespace exogait::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Runs one CLI invocation. args excludes the program name. Exit codes:
/// 0 success, 2 input/config error, 3 I/O error.
int run(const std::vector<std::string>& args);

int run(int argc, char** argv);

}  // namespace exogait::cli
