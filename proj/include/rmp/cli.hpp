#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rmp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  ///< verify found a failing property
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNoConvergence = 3;

/// Parses "start:stop:count" (inclusive, evenly spaced), "a,b,c" or a single
/// number. Throws ArgumentError for an empty or non-increasing grid.
std::vector<double> parse_grid(const std::string& text);

/// Entry point of the rmp tool. Tables go to `out` unless --output or
/// RMP_OUTPUT_DIR redirects them; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rmp::cli
