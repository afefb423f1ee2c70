#pragma once

// Command-line front end. Standard output always receives exactly one JSON
// document; diagnostics and timings go to standard error.
//
// Exit codes: 0 success, 1 invalid input, 2 verification failure.

#include <ostream>
#include <string>
#include <vector>

namespace msflow::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitFailed = 2;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace msflow::cli
