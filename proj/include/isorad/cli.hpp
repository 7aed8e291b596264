#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace isorad::cli {

/// Process exit codes; a stable contract for scripts.
enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kBadInput = 3,
  kResourceCap = 4,
  kWitness = 10,
};

/// Environment variable naming the default directory of the count cache.
inline constexpr const char* kCacheDirEnv = "ISOGENY_RADICAL_CACHE_DIR";

/// Runs one command. `args` excludes the program name. Reports go to `out`,
/// diagnostics and timing to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace isorad::cli
