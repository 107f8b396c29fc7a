#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cellkit {

// Exit statuses of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;

struct CliEnvironment {
  bool stdout_is_tty = false;
  // Value of CELLKIT_CACHE_DIR, empty when unset.
  std::string cache_dir;
};

/// Runs `cellkit <command> ...` with args excluding the program name.
/// Commands: cells, verify, subgroup, info.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const CliEnvironment& env = {});

}  // namespace cellkit
