#pragma once

// Plain-text trace dump, one event per line:
//
//   L A i j | L B i j | L C i j     load
//   S C i j                         store
//   E X i j                         evict (X is A, B or C)
//   F i j p                         fma
//
// ASCII, LF-terminated. The parser additionally skips blank lines and lines
// starting with '#'.

#include <iosfwd>
#include <string>

#include "iomma/core.hpp"

namespace iomma {

std::string format_event(const TraceEvent& event);

void write_trace(std::ostream& out, const Schedule& schedule);

/// Parses a dump produced by write_trace. Coordinates are checked against
/// `dims`; malformed lines throw Error(ParseError) naming the line number.
Schedule read_trace(std::istream& in, const ProblemDims& dims);

} // namespace iomma
