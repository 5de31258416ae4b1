#pragma once

#include <cstdint>

#include "iomma/memsim.hpp"

namespace iomma {

/// SplitMix64. Each call advances the state by 0x9E3779B97F4A7C15 and returns
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   z ^ (z >> 31)
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Top 53 bits mapped to [-1, 1): 2 * (next() >> 11) * 2^-53 - 1.
    double uniform_pm1() {
        return 2.0 * (double(next() >> 11) * 0x1.0p-53) - 1.0;
    }

private:
    std::uint64_t state_;
};

struct GemmInputs {
    DenseMatrix a;
    DenseMatrix b;
    DenseMatrix c;
};

/// Fills A, then B, then C (each row-major) from one SplitMix64 stream.
GemmInputs random_inputs(const ProblemDims& dims, std::uint64_t seed);

} // namespace iomma
