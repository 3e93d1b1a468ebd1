#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace dahaze::cli {

inline constexpr std::uint64_t kDefaultSeed = 0xDA11A5E;

// Exit codes: stable contract for scripts.
enum ExitCode : int { kOk = 0, kUsage = 2, kIo = 3, kInvariant = 4 };

// Runs one subcommand. args excludes the program name. Reports go to `out`,
// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dahaze::cli
