#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lowtw::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerdict = 2;
inline constexpr int kExitFailure = 3;

// Runs one command; results go to out as "key value" lines, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lowtw::cli
