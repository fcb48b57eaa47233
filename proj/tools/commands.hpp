#pragma once

#include <iosfwd>

namespace chemosched::cli {

// Exit codes: 0 success, 1 failed solve / check / reproduction, 2 usage,
// I/O or spec errors.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace chemosched::cli
