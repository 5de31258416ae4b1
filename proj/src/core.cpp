#include "iomma/core.hpp"

#include <limits>
#include <sstream>

namespace iomma {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidDims: return "InvalidDims";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::OutOfBounds: return "OutOfBounds";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::NonResidentOperand: return "NonResidentOperand";
        case ErrorCode::CapacityExceeded: return "CapacityExceeded";
        case ErrorCode::DoubleLoad: return "DoubleLoad";
        case ErrorCode::DirtyEviction: return "DirtyEviction";
        case ErrorCode::EvictNonResident: return "EvictNonResident";
        case ErrorCode::StoreNonC: return "StoreNonC";
        case ErrorCode::StoreNonResident: return "StoreNonResident";
        case ErrorCode::IncompleteWriteback: return "IncompleteWriteback";
        case ErrorCode::TooSmall: return "TooSmall";
        case ErrorCode::GridTooFine: return "GridTooFine";
        case ErrorCode::CapsExceeded: return "CapsExceeded";
        case ErrorCode::UnvalidatedTrace: return "UnvalidatedTrace";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

ProblemDims ProblemDims::make(std::int64_t m, std::int64_t n, std::int64_t k) {
    constexpr auto limit = static_cast<std::int64_t>(std::numeric_limits<Index>::max());
    auto check = [&](std::int64_t v, const char* name) {
        if (v < 1 || v > limit) {
            throw Error(ErrorCode::InvalidDims,
                        std::string(name) + " = " + std::to_string(v) + " must be >= 1");
        }
        return static_cast<Index>(v);
    };
    return ProblemDims{check(m, "m"), check(n, "n"), check(k, "k")};
}

char to_char(MatrixId id) {
    switch (id) {
        case MatrixId::A: return 'A';
        case MatrixId::B: return 'B';
        case MatrixId::C: return 'C';
    }
    return '?';
}

Count fma_count(const ProblemDims& dims) {
    return Count{dims.m} * dims.n * dims.k;
}

Index rows_of(MatrixId id, const ProblemDims& dims) {
    switch (id) {
        case MatrixId::A: return dims.m;
        case MatrixId::B: return dims.k;
        case MatrixId::C: return dims.m;
    }
    return 0;
}

Index cols_of(MatrixId id, const ProblemDims& dims) {
    switch (id) {
        case MatrixId::A: return dims.k;
        case MatrixId::B: return dims.n;
        case MatrixId::C: return dims.n;
    }
    return 0;
}

namespace {

std::optional<OutOfBounds> check_ref(const OperandRef& ref, const ProblemDims& dims) {
    const Index rows = rows_of(ref.matrix, dims);
    const Index cols = cols_of(ref.matrix, dims);
    if (ref.row >= rows) return OutOfBounds{"row", ref.row, rows};
    if (ref.col >= cols) return OutOfBounds{"col", ref.col, cols};
    return std::nullopt;
}

} // namespace

std::optional<OutOfBounds> validate_event(const TraceEvent& event, const ProblemDims& dims) {
    return std::visit(
        [&](const auto& e) -> std::optional<OutOfBounds> {
            if constexpr (std::is_same_v<std::decay_t<decltype(e)>, Fma>) {
                if (e.i >= dims.m) return OutOfBounds{"i", e.i, dims.m};
                if (e.j >= dims.n) return OutOfBounds{"j", e.j, dims.n};
                if (e.p >= dims.k) return OutOfBounds{"p", e.p, dims.k};
                return std::nullopt;
            } else {
                return check_ref(e.ref, dims);
            }
        },
        event);
}

std::string describe(const TraceEvent& event) {
    std::ostringstream os;
    std::visit(
        [&](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, Fma>) {
                os << "Fma(" << e.i << "," << e.j << "," << e.p << ")";
            } else {
                const char* name = std::is_same_v<T, Load> ? "Load" : std::is_same_v<T, Store> ? "Store" : "Evict";
                os << name << "(" << to_char(e.ref.matrix) << "," << e.ref.row << "," << e.ref.col << ")";
            }
        },
        event);
    return os.str();
}

} // namespace iomma
