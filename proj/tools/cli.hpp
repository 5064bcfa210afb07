#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace maxinf::cli {

inline constexpr std::uint64_t kDefaultSeed = 42;

enum ExitCode : int { kOk = 0, kInternal = 1, kUsage = 2, kData = 3, kCapacity = 4 };

// Runs one invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Asks a running `anytime` invocation to return its latest solution. Safe to
// call from a signal handler.
void request_stop() noexcept;

}  // namespace maxinf::cli
