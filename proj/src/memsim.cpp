#include "iomma/memsim.hpp"

#include <algorithm>
#include <cstring>

namespace iomma {

bool DenseMatrix::bitwise_equal(const DenseMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) return false;
    return data_.empty() ||
           std::memcmp(data_.data(), other.data_.data(), data_.size() * sizeof(double)) == 0;
}

DenseMatrix DenseMatrix::identity(Index n) {
    DenseMatrix id(n, n);
    for (Index i = 0; i < n; ++i) id(i, i) = 1.0;
    return id;
}

// ---------------------------------------------------------------------------
// ResidencyTracker
// ---------------------------------------------------------------------------

ResidencyTracker::ResidencyTracker(ProblemDims dims, Count capacity)
    : dims_(dims), capacity_(capacity) {
    b_base_ = std::size_t{dims.m} * dims.k;
    c_base_ = b_base_ + std::size_t{dims.k} * dims.n;
    slots_.resize(c_base_ + std::size_t{dims.m} * dims.n);
}

std::size_t ResidencyTracker::slot_index(const OperandRef& ref) const {
    switch (ref.matrix) {
        case MatrixId::A: return std::size_t{ref.row} * dims_.k + ref.col;
        case MatrixId::B: return b_base_ + std::size_t{ref.row} * dims_.n + ref.col;
        case MatrixId::C: return c_base_ + std::size_t{ref.row} * dims_.n + ref.col;
    }
    return 0;
}

void ResidencyTracker::fail(ErrorCode code, const TraceEvent& event, const std::string& why) const {
    throw Error(code, "event #" + std::to_string(events_) + " " + describe(event) + ": " + why);
}

void ResidencyTracker::apply(const TraceEvent& event) {
    if (auto oob = validate_event(event, dims_)) {
        fail(ErrorCode::OutOfBounds, event,
             oob->coordinate + " = " + std::to_string(oob->value) + " >= " + std::to_string(oob->limit));
    }

    if (const auto* load = std::get_if<Load>(&event)) {
        Slot& s = slot(load->ref);
        if (s.resident) fail(ErrorCode::DoubleLoad, event, "operand already resident");
        if (occupancy_ >= capacity_) {
            fail(ErrorCode::CapacityExceeded, event, "fast memory full (S = " + std::to_string(capacity_) + ")");
        }
        s.resident = true;
        s.dirty = false;
        ++occupancy_;
        ++stats_.reads;
        stats_.peak_residency = std::max(stats_.peak_residency, occupancy_);
    } else if (const auto* store = std::get_if<Store>(&event)) {
        if (store->ref.matrix != MatrixId::C) fail(ErrorCode::StoreNonC, event, "A and B are read-only");
        Slot& s = slot(store->ref);
        if (!s.resident) fail(ErrorCode::StoreNonResident, event, "operand not in fast memory");
        if (s.dirty) --dirty_count_;
        s = Slot{};
        --occupancy_;
        ++stats_.writes;
    } else if (const auto* evict = std::get_if<Evict>(&event)) {
        Slot& s = slot(evict->ref);
        if (!s.resident) fail(ErrorCode::EvictNonResident, event, "operand not in fast memory");
        if (s.dirty) fail(ErrorCode::DirtyEviction, event, "dirty C slot must be stored, not evicted");
        s = Slot{};
        --occupancy_;
    } else {
        const auto& f = std::get<Fma>(event);
        const OperandRef a{MatrixId::A, f.i, f.p};
        const OperandRef b{MatrixId::B, f.p, f.j};
        const OperandRef c{MatrixId::C, f.i, f.j};
        if (!slot(a).resident) fail(ErrorCode::NonResidentOperand, event, "A(" + std::to_string(f.i) + "," + std::to_string(f.p) + ") not resident");
        if (!slot(b).resident) fail(ErrorCode::NonResidentOperand, event, "B(" + std::to_string(f.p) + "," + std::to_string(f.j) + ") not resident");
        Slot& cs = slot(c);
        if (!cs.resident) fail(ErrorCode::NonResidentOperand, event, "C(" + std::to_string(f.i) + "," + std::to_string(f.j) + ") not resident");
        if (!cs.dirty) {
            cs.dirty = true;
            ++dirty_count_;
        }
        ++stats_.fmas;
    }
    ++events_;
}

void ResidencyTracker::finish() const {
    if (dirty_count_ != 0) {
        throw Error(ErrorCode::IncompleteWriteback,
                    std::to_string(dirty_count_) + " dirty C element(s) still resident at end of schedule");
    }
}

// ---------------------------------------------------------------------------
// FastMemory
// ---------------------------------------------------------------------------

FastMemory::FastMemory(ProblemDims dims, Count capacity)
    : tracker_(dims, capacity), values_(tracker_.slot_count(), 0.0) {}

double FastMemory::value(const OperandRef& ref) const {
    if (!tracker_.resident(ref)) {
        throw Error(ErrorCode::NonResidentOperand, "value() of non-resident operand");
    }
    return values_[offset(ref)];
}

void FastMemory::apply(const TraceEvent& event, const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& slow_c) {
    tracker_.apply(event);  // throws before any value changes

    if (const auto* load = std::get_if<Load>(&event)) {
        const auto& r = load->ref;
        const DenseMatrix& src = r.matrix == MatrixId::A ? a : r.matrix == MatrixId::B ? b : slow_c;
        values_[offset(r)] = src(r.row, r.col);
    } else if (const auto* store = std::get_if<Store>(&event)) {
        const auto& r = store->ref;
        slow_c(r.row, r.col) = values_[offset(r)];
    } else if (const auto* f = std::get_if<Fma>(&event)) {
        const double alpha = values_[offset({MatrixId::A, f->i, f->p})];
        const double beta = values_[offset({MatrixId::B, f->p, f->j})];
        double& gamma = values_[offset({MatrixId::C, f->i, f->j})];
        gamma = gamma + alpha * beta;
    }
}

// ---------------------------------------------------------------------------
// Executor
// ---------------------------------------------------------------------------

namespace {

void check_shape(const DenseMatrix& mat, Index rows, Index cols, const char* name) {
    if (mat.rows() != rows || mat.cols() != cols) {
        throw Error(ErrorCode::ShapeMismatch, std::string(name) + " is " + std::to_string(mat.rows()) + "x" +
                                                  std::to_string(mat.cols()) + ", expected " +
                                                  std::to_string(rows) + "x" + std::to_string(cols));
    }
}

} // namespace

Executor::Executor(ProblemDims dims, MemoryConfig config, DenseMatrix a, DenseMatrix b, DenseMatrix c_in)
    : a_(std::move(a)), b_(std::move(b)), slow_c_(std::move(c_in)), fast_(dims, config.S) {
    if (config.S < 1) throw Error(ErrorCode::InvalidArgument, "S must be >= 1");
    check_shape(a_, dims.m, dims.k, "A");
    check_shape(b_, dims.k, dims.n, "B");
    check_shape(slow_c_, dims.m, dims.n, "C");
}

DenseMatrix Executor::finish() {
    fast_.finish();
    return slow_c_;
}

ExecutionResult execute(Schedule schedule, MemoryConfig config, const DenseMatrix& a, const DenseMatrix& b,
                        const DenseMatrix& c_in) {
    Executor exec(schedule.dims, config, a, b, c_in);
    for (const auto& e : schedule.events) exec.apply(e);
    DenseMatrix out = exec.finish();
    return ExecutionResult{exec.stats(), std::move(schedule), std::move(out)};
}

IOStats simulate_counts(const Schedule& schedule, MemoryConfig config) {
    ResidencyTracker tracker(schedule.dims, config.S);
    for (const auto& e : schedule.events) tracker.apply(e);
    tracker.finish();
    return tracker.stats();
}

DenseMatrix reference_gemm(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& c_in) {
    if (a.cols() != b.rows() || c_in.rows() != a.rows() || c_in.cols() != b.cols()) {
        throw Error(ErrorCode::ShapeMismatch, "reference_gemm: incompatible shapes");
    }
    DenseMatrix c = c_in;
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < b.cols(); ++j) {
            double gamma = c(i, j);
            for (Index p = 0; p < a.cols(); ++p) {
                gamma = gamma + a(i, p) * b(p, j);
            }
            c(i, j) = gamma;
        }
    }
    return c;
}

} // namespace iomma
