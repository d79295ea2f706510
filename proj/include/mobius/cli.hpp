#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mobius::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerdictFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCapacity = 3;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kDefaultOutDir = "mobius-out";
// Only environment variable consulted; --out-dir wins over it.
inline constexpr const char* kOutDirEnv = "MOBIUS_OUT_DIR";

// args excludes the program name.
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int parse_and_dispatch(int argc, const char* const* argv);

} // namespace mobius::cli
