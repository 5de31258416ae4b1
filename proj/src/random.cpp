#include "iomma/random.hpp"

namespace iomma {

GemmInputs random_inputs(const ProblemDims& dims, std::uint64_t seed) {
    SplitMix64 rng(seed);
    GemmInputs in{DenseMatrix(dims.m, dims.k), DenseMatrix(dims.k, dims.n), DenseMatrix(dims.m, dims.n)};
    for (double& v : in.a.data()) v = rng.uniform_pm1();
    for (double& v : in.b.data()) v = rng.uniform_pm1();
    for (double& v : in.c.data()) v = rng.uniform_pm1();
    return in;
}

} // namespace iomma
