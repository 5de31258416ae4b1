/**
 * @file core.hpp
 * @brief Value types shared by every part of the toolkit.
 *
 * A computation is C := AB + C with A (m x k), B (k x n), C (m x n).
 * Work is expressed as an ordered list of events against a two-level
 * memory: Load and Store move one scalar between slow and fast memory and
 * cost one I/O each, Evict drops a clean fast-memory copy for free, and
 * Fma(i, j, p) performs gamma(i,j) += alpha(i,p) * beta(p,j) on resident
 * operands.
 */

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "iomma/error.hpp"

namespace iomma {

using Count = std::uint64_t;
using Index = std::uint32_t;

struct ProblemDims {
    Index m = 1;
    Index n = 1;
    Index k = 1;

    /// Throws Error(InvalidDims) unless every extent is >= 1 and fits an Index.
    static ProblemDims make(std::int64_t m, std::int64_t n, std::int64_t k);

    auto operator<=>(const ProblemDims&) const = default;
};

enum class MatrixId : std::uint8_t { A, B, C };

char to_char(MatrixId id);

struct OperandRef {
    MatrixId matrix = MatrixId::A;
    Index row = 0;
    Index col = 0;

    auto operator<=>(const OperandRef&) const = default;
};

struct Load {
    OperandRef ref;
    bool operator==(const Load&) const = default;
};

struct Store {
    OperandRef ref;
    bool operator==(const Store&) const = default;
};

struct Evict {
    OperandRef ref;
    bool operator==(const Evict&) const = default;
};

struct Fma {
    Index i = 0;
    Index j = 0;
    Index p = 0;
    bool operator==(const Fma&) const = default;
};

using TraceEvent = std::variant<Load, Store, Evict, Fma>;

inline bool is_io(const TraceEvent& e) {
    return std::holds_alternative<Load>(e) || std::holds_alternative<Store>(e);
}

struct Schedule {
    ProblemDims dims;
    std::vector<TraceEvent> events;
};

struct IOStats {
    Count reads = 0;
    Count writes = 0;
    Count fmas = 0;
    Count peak_residency = 0;

    [[nodiscard]] Count io_total() const { return reads + writes; }

    bool operator==(const IOStats&) const = default;
};

/// m * n * k, the number of FMAs any conventional MMA must perform.
Count fma_count(const ProblemDims& dims);

/// Number of rows/cols of an operand matrix for the given problem.
Index rows_of(MatrixId id, const ProblemDims& dims);
Index cols_of(MatrixId id, const ProblemDims& dims);

struct OutOfBounds {
    std::string coordinate;  // "i", "j", "p", "row" or "col"
    Index value = 0;
    Index limit = 0;
};

/// nullopt when the event's coordinates are inside the operand shapes.
/// Policy checks (e.g. storing B) are the simulator's job, not this one's.
std::optional<OutOfBounds> validate_event(const TraceEvent& event, const ProblemDims& dims);

std::string describe(const TraceEvent& event);

} // namespace iomma
