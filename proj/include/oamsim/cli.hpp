#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace oamsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitIo = 3;

/// Environment variable holding the default worker count.
inline constexpr const char* kThreadsEnv = "OAMSIM_THREADS";

/// `args[0]` is the program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace oamsim::cli
