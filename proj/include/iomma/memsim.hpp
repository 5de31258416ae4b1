/**
 * @file memsim.hpp
 * @brief Two-level memory executor for load/store/evict/FMA schedules.
 *
 * Slow memory holds A, B and C in full. Fast memory holds at most S scalars,
 * one matrix element per slot. An FMA may only touch elements that are
 * resident, and the accumulation happens in place in the resident C slot:
 * the executor never stores a product anywhere else.
 *
 * Policy enforced on every event (violations throw iomma::Error):
 *   - Load of a resident element          -> DoubleLoad
 *   - Load when occupancy == S            -> CapacityExceeded
 *   - Fma with a non-resident operand     -> NonResidentOperand
 *   - Evict of a dirty C element          -> DirtyEviction
 *   - Evict of a non-resident element     -> EvictNonResident
 *   - Store of an A or B element          -> StoreNonC
 *   - Store of a non-resident element     -> StoreNonResident
 *   - dirty slot left at end of schedule  -> IncompleteWriteback
 */

#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "iomma/core.hpp"

namespace iomma {

struct MemoryConfig {
    Count S = 3;

    static constexpr Count unbounded = std::numeric_limits<Count>::max();
};

/// Dense row-major matrix of doubles.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(Index rows, Index cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(std::size_t{rows} * cols, fill) {}

    [[nodiscard]] Index rows() const { return rows_; }
    [[nodiscard]] Index cols() const { return cols_; }

    double& operator()(Index r, Index c) { return data_[std::size_t{r} * cols_ + c]; }
    double operator()(Index r, Index c) const { return data_[std::size_t{r} * cols_ + c]; }

    [[nodiscard]] const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    /// Element-wise bit equality (distinguishes -0.0 from 0.0 and NaN payloads).
    [[nodiscard]] bool bitwise_equal(const DenseMatrix& other) const;

    static DenseMatrix identity(Index n);

private:
    Index rows_ = 0;
    Index cols_ = 0;
    std::vector<double> data_;
};

/// Residency bookkeeping without values: which elements are in fast memory,
/// which C elements are dirty, and the occupancy/peak counters. Enforces the
/// whole event policy. Used directly by the phase analyzer and for count-only
/// sweeps; the value-carrying Executor wraps it.
class ResidencyTracker {
public:
    ResidencyTracker(ProblemDims dims, Count capacity);

    /// Validates and applies one event. Throws iomma::Error on any violation.
    void apply(const TraceEvent& event);

    /// Throws IncompleteWriteback when a dirty slot is still resident.
    void finish() const;

    [[nodiscard]] bool resident(const OperandRef& ref) const { return slot(ref).resident; }
    [[nodiscard]] bool dirty(const OperandRef& ref) const { return slot(ref).dirty; }
    [[nodiscard]] Count occupancy() const { return occupancy_; }
    [[nodiscard]] const IOStats& stats() const { return stats_; }
    [[nodiscard]] const ProblemDims& dims() const { return dims_; }
    [[nodiscard]] Count capacity() const { return capacity_; }
    [[nodiscard]] Count events_applied() const { return events_; }

    /// Dense index of an element: A row-major, then B, then C.
    [[nodiscard]] std::size_t slot_index(const OperandRef& ref) const;
    [[nodiscard]] std::size_t slot_count() const { return slots_.size(); }

private:
    struct Slot {
        bool resident = false;
        bool dirty = false;
    };

    [[nodiscard]] const Slot& slot(const OperandRef& ref) const { return slots_[slot_index(ref)]; }
    Slot& slot(const OperandRef& ref) { return slots_[slot_index(ref)]; }

    [[noreturn]] void fail(ErrorCode code, const TraceEvent& event, const std::string& why) const;

    ProblemDims dims_;
    Count capacity_;
    std::vector<Slot> slots_;
    std::size_t b_base_ = 0;
    std::size_t c_base_ = 0;
    Count occupancy_ = 0;
    Count dirty_count_ = 0;
    Count events_ = 0;
    IOStats stats_;
};

/// Fast memory with values. Holds nothing but copies of matrix elements;
/// dirty is only ever set on C elements.
class FastMemory {
public:
    FastMemory(ProblemDims dims, Count capacity);

    void apply(const TraceEvent& event, const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& slow_c);
    void finish() const { tracker_.finish(); }

    [[nodiscard]] const ResidencyTracker& tracker() const { return tracker_; }
    [[nodiscard]] double value(const OperandRef& ref) const;

private:
    [[nodiscard]] std::size_t offset(const OperandRef& ref) const { return tracker_.slot_index(ref); }

    ResidencyTracker tracker_;
    std::vector<double> values_;
};

/// Streaming executor: feed events one at a time, then call finish().
class Executor {
public:
    Executor(ProblemDims dims, MemoryConfig config, DenseMatrix a, DenseMatrix b, DenseMatrix c_in);

    void apply(const TraceEvent& event) { fast_.apply(event, a_, b_, slow_c_); }

    /// Checks final write-back and returns slow memory's C.
    DenseMatrix finish();

    [[nodiscard]] const IOStats& stats() const { return fast_.tracker().stats(); }
    [[nodiscard]] Count occupancy() const { return fast_.tracker().occupancy(); }

private:
    DenseMatrix a_;
    DenseMatrix b_;
    DenseMatrix slow_c_;
    FastMemory fast_;
};

struct ExecutionResult {
    IOStats stats;
    Schedule trace;
    DenseMatrix output_c;
};

/// Runs a complete schedule from an empty fast memory.
ExecutionResult execute(Schedule schedule, MemoryConfig config, const DenseMatrix& a,
                        const DenseMatrix& b, const DenseMatrix& c_in);

/// Count-only execution: same policy checks, no values. Throws on violation.
IOStats simulate_counts(const Schedule& schedule, MemoryConfig config);

/// c_in + a*b by the canonical triple loop, p innermost ascending.
DenseMatrix reference_gemm(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& c_in);

} // namespace iomma
