#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "iomma/core.hpp"

namespace iomma::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;     // invalid arguments or precondition failure
inline constexpr int kExitMismatch = 2;  // correctness, count or invariant mismatch

/// Runs the command line `args` (args[0] is the program name). Reports go to
/// `out` unless -o is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "a,b,c", "lo:hi" and "lo:hi:step" items (mixable, comma separated).
/// A range with lo > hi is empty. Throws Error(InvalidArgument) on bad input.
std::vector<std::int64_t> parse_int_list(std::string_view text);

/// Sweep concurrency: IOMMA_THREADS if set and positive, else hardware threads.
unsigned sweep_threads();

} // namespace iomma::cli
