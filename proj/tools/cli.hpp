#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace spdmix::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,
  kExitUsage = 2,
  kExitDomain = 3,
  kExitInvariant = 4,
};

/// Runs one invocation. `args` excludes the program name. Reports go to `out`,
/// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker count from SPD_AUGMENT_THREADS (unset or 0 means hardware
/// concurrency).
unsigned worker_threads();

}  // namespace spdmix::cli
