#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iomma {

enum class ErrorCode {
    InvalidDims,
    InvalidArgument,
    OutOfBounds,
    ShapeMismatch,
    NonResidentOperand,
    CapacityExceeded,
    DoubleLoad,
    DirtyEviction,
    EvictNonResident,
    StoreNonC,
    StoreNonResident,
    IncompleteWriteback,
    TooSmall,
    GridTooFine,
    CapsExceeded,
    UnvalidatedTrace,
    EmptyInput,
    ParseError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` identifies the failure
/// class, `what()` carries a human-readable detail.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace iomma
