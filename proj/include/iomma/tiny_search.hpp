#pragma once

#include "iomma/core.hpp"

namespace iomma {

struct TinySearchCaps {
    static constexpr Count max_fmas = 8;
    static constexpr Count max_S = 6;
};

struct TinyOptimum {
    Count min_io = 0;       // exact minimum when complete, else best upper bound found
    Schedule schedule;      // witness achieving min_io
    bool complete = false;  // false if the node budget ran out first
    Count nodes_expanded = 0;
};

/// Depth-first branch-and-bound over every event sequence the simulator
/// accepts, starting from empty fast memory and ending with all of C written
/// back. Cost is loads + stores; the pruning bound is the number of operands
/// still needed but not resident plus the number of C elements still owing
/// a store. Moves are tried loads, then FMAs, then stores, then evicts.
///
/// Throws CapsExceeded when mnk > 8 or S > 6, TooSmall when S < 3.
TinyOptimum tiny_optimal_schedule(const ProblemDims& dims, Count S, Count node_budget = 50'000'000);

} // namespace iomma
