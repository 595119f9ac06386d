#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace fracdim {

inline constexpr const char* kToolVersion = "0.3.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitAssertion = 1,
  kExitUsage = 2,
  kExitBudget = 3,
};

/// 64-bit FNV-1a, used to fingerprint serialized run configurations.
std::uint64_t fnv1a(std::string_view data);

/// Entry point behind the fracdim executable. `args` excludes the program name.
/// Machine-readable results go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fracdim
