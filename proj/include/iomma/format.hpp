#pragma once

#include <string>

namespace iomma {

/// Shortest decimal string that round-trips to the same double ('.' separator,
/// no grouping, locale independent).
std::string format_double(double value);

} // namespace iomma
