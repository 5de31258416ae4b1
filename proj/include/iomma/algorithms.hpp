/**
 * @file algorithms.hpp
 * @brief Schedule generators for the naive algorithm and the three square-block
 *        algorithms, plus their predicted I/O counts.
 *
 * All blocked variants use a square tile edge b = floor(sqrt(S)) - 1, which
 * leaves room for b elements of A and b elements of B beside a b x b tile:
 *
 *   alg-c  keeps a b x b block of C resident and applies k rank-1 updates,
 *          streaming b elements of A and b of B per update.
 *   alg-b  keeps a b x b block of B resident and streams rows of A and C.
 *   alg-a  keeps a b x b block of A resident and streams columns of B and C.
 *
 * Edge blocks use their true (smaller) extents. Every generator visits each
 * (i, j) accumulation in ascending p, so simulated output is bitwise equal to
 * reference_gemm.
 */

#pragma once

#include <functional>
#include <optional>
#include <string_view>

#include "iomma/core.hpp"

namespace iomma {

enum class Algorithm { Naive, A, B, C };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::Naive, Algorithm::A, Algorithm::B, Algorithm::C};

/// CLI names: naive, alg-a, alg-b, alg-c.
std::string_view algorithm_name(Algorithm alg);
std::optional<Algorithm> parse_algorithm(std::string_view name);

/// max(1, floor(sqrt(S)) - 1). Throws TooSmall for S < 4.
Index block_size(Count S);

/// Partition of the three extents into b-sized blocks plus remainders.
struct BlockGrid {
    Index b = 1;
    Index full_blocks_m = 0, full_blocks_n = 0, full_blocks_k = 0;
    Index rem_m = 0, rem_n = 0, rem_k = 0;

    static BlockGrid make(const ProblemDims& dims, Index b);

    [[nodiscard]] Index blocks_m() const { return full_blocks_m + (rem_m ? 1 : 0); }
    [[nodiscard]] Index blocks_n() const { return full_blocks_n + (rem_n ? 1 : 0); }
    [[nodiscard]] Index blocks_k() const { return full_blocks_k + (rem_k ? 1 : 0); }

    /// Extent of block `idx` along m, n or k (b, or the remainder for the last).
    [[nodiscard]] Index extent_m(Index idx) const { return idx < full_blocks_m ? b : rem_m; }
    [[nodiscard]] Index extent_n(Index idx) const { return idx < full_blocks_n ? b : rem_n; }
    [[nodiscard]] Index extent_k(Index idx) const { return idx < full_blocks_k ? b : rem_k; }

    [[nodiscard]] bool divides_all() const { return rem_m == 0 && rem_n == 0 && rem_k == 0; }
};

using EventSink = std::function<void(const TraceEvent&)>;

/// Streams the schedule to `sink` without materializing it.
void emit_schedule(Algorithm alg, const ProblemDims& dims, Count S, const EventSink& sink);

Schedule naive_schedule(const ProblemDims& dims);
Schedule algA_schedule(const ProblemDims& dims, Count S);
Schedule algB_schedule(const ProblemDims& dims, Count S);
Schedule algC_schedule(const ProblemDims& dims, Count S);
Schedule make_schedule(Algorithm alg, const ProblemDims& dims, Count S);

struct PredictedIO {
    Count reads = 0;
    Count writes = 0;
    double closed_form_reads = 0.0;
    double closed_form_writes = 0.0;

    [[nodiscard]] Count io_total() const { return reads + writes; }
    /// Cost when writes overlap reads on full-duplex memory.
    [[nodiscard]] Count effective() const { return reads > writes ? reads : writes; }
    [[nodiscard]] bool write_hidden() const { return writes <= reads; }
};

/// Exact counts by block summation (partial blocks included) and the
/// divisible-case closed forms evaluated with b = block_size(S).
/// Naive ignores S; the blocked algorithms throw TooSmall for S < 4.
PredictedIO predicted_io(Algorithm alg, const ProblemDims& dims, Count S);

/// Peak fast-memory occupancy the generator reaches (b^2 + 2b for full blocks).
Count predicted_peak_residency(Algorithm alg, const ProblemDims& dims, Count S);

namespace fault {

/// Test hook: offset added to the block size the generators use (not the
/// predictions). Zero in normal operation.
void set_generator_block_offset(int offset);
int generator_block_offset();

} // namespace fault

} // namespace iomma
