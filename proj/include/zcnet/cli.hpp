#ifndef ZCNET_CLI_HPP
#define ZCNET_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace zcnet {

inline constexpr std::uint64_t kDefaultSeed = 20240001;

/// Exit codes of run_cli.
enum ExitCode : int { kExitOk = 0, kExitNegative = 1, kExitUsage = 2 };

/// Runs one subcommand (analyze, select, verify, simulate, export-dot).
/// `args` excludes the program name. Output reaches `out` only on success;
/// diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zcnet

#endif  // ZCNET_CLI_HPP
