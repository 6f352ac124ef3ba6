#pragma once

#include <string>
#include <vector>

namespace landcover::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2 };

/// Entry point of the `landcover` tool; argv[0] is the program name.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace landcover::cli
