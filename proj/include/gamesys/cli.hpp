#pragma once

#include <iosfwd>

namespace gamesys {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Runs one command line. Exit codes: 0 on success, 1 when the input design
// or data fails (validation, parsing, IO), 2 on usage errors (bad flags,
// unknown metric names, out-of-range settings). With --json, errors are
// written to `err` as a JSON object.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err, std::istream& in);

}  // namespace gamesys
