#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dpres::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;     // verification failed, solver disagreement, usage error
inline constexpr int kParseError = 2;
inline constexpr int kPrecondition = 3;
inline constexpr int kSizeCap = 4;
inline constexpr int kTimeout = 5;

// Runs one command; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dpres::cli
