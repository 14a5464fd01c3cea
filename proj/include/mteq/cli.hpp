#pragma once

#include <iosfwd>

namespace mteq {

// Exit codes.
inline constexpr int kExitConverged = 0;
inline constexpr int kExitIoError = 1;      // I/O, parse and usage errors
inline constexpr int kExitIterationCap = 2;
inline constexpr int kExitInfeasible = 3;   // bad start, assumption or M-tensor failure

/// Entry point for `mteq solve|gen|verify|bench`. Never throws.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mteq
