#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pun::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

/// Entry point of the `pun` tool. `args` excludes the program name.
/// Summaries go to `out`, progress and errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pun::cli
