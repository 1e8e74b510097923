#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kmm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs the tool on `args` (without the program name). Results go to `out`,
/// messages to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kmm::cli
