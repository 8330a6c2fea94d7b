#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vtdc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitFlagged = 2;

/// Entry point of the `vtdc` tool. `args` excludes the program name.
/// Subcommands: convert, characterize, tof, info.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vtdc
