#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace xenorisk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitData = 2;

// Runs one subcommand. `args` includes the program name. Returns 0 on
// success, 1 for invalid usage or configuration, 2 for missing or malformed
// data.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace xenorisk::cli
