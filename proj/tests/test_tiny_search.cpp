#include "doctest.h"

#include "iomma/algorithms.hpp"
#include "iomma/bounds.hpp"
#include "iomma/memsim.hpp"
#include "iomma/tiny_search.hpp"
#include "oracles.hpp"

using namespace iomma;

TEST_CASE("tiny optima examples") {
    const auto one = tiny_optimal_schedule(ProblemDims::make(1, 1, 1), 3);
    CHECK(one.complete);
    CHECK(one.min_io == 4);
    const auto two = tiny_optimal_schedule(ProblemDims::make(2, 2, 1), 4);
    CHECK(two.complete);
    CHECK(two.min_io == 12);
}

TEST_CASE("witness schedules replay to the reported cost") {
    for (auto [m, n, k, S] : {std::tuple{1, 1, 2, 3}, {2, 1, 2, 4}, {2, 2, 2, 6}, {1, 2, 3, 5}, {2, 2, 1, 3}}) {
        const auto d = ProblemDims::make(m, n, k);
        const auto r = tiny_optimal_schedule(d, Count(S));
        REQUIRE(r.complete);
        const auto st = simulate_counts(r.schedule, MemoryConfig{Count(S)});
        CHECK(st.io_total() == r.min_io);
        CHECK(st.fmas == fma_count(d));
    }
}

TEST_CASE("branch and bound agrees with an exhaustive search") {
    for (auto [m, n, k, S] : {std::tuple{1, 1, 1, 3}, {1, 1, 2, 3}, {1, 1, 2, 4}, {1, 2, 1, 3}, {2, 1, 1, 4},
                              {2, 2, 1, 4}, {2, 2, 1, 5}, {1, 2, 2, 4}, {2, 1, 2, 3}, {1, 1, 3, 4}}) {
        const auto d = ProblemDims::make(m, n, k);
        CAPTURE(m);
        CAPTURE(n);
        CAPTURE(k);
        CAPTURE(S);
        CHECK(tiny_optimal_schedule(d, Count(S)).min_io == oracle::exhaustive_min_io(d, Count(S)));
    }
}

TEST_CASE("optimum sits between the lower bound and every shipped algorithm") {
    for (Index m = 1; m <= 2; ++m)
        for (Index n = 1; n <= 2; ++n)
            for (Index k = 1; k <= 2; ++k)
                for (Count S = 3; S <= 6; ++S) {
                    const auto d = ProblemDims::make(m, n, k);
                    const auto r = tiny_optimal_schedule(d, S);
                    REQUIRE(r.complete);
                    CHECK(double(r.min_io) >= lower_bound_final(d, double(S)));
                    CHECK(r.min_io >= 2 * m * n + m * k + k * n);
                    for (auto alg : kAllAlgorithms) {
                        if (alg != Algorithm::Naive && S < 4) continue;
                        CHECK(r.min_io <= predicted_io(alg, d, S).io_total());
                    }
                }
}

TEST_CASE("caps and preconditions") {
    auto code = [](auto fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InvalidArgument;
    };
    CHECK(code([] { tiny_optimal_schedule(ProblemDims::make(3, 3, 1), 4); }) == ErrorCode::CapsExceeded);
    CHECK(code([] { tiny_optimal_schedule(ProblemDims::make(1, 1, 1), 7); }) == ErrorCode::CapsExceeded);
    CHECK(code([] { tiny_optimal_schedule(ProblemDims::make(1, 1, 1), 2); }) == ErrorCode::TooSmall);
}

TEST_CASE("an exhausted budget reports an upper bound, not an optimum") {
    const auto d = ProblemDims::make(2, 2, 2);
    const auto r = tiny_optimal_schedule(d, 4, 1);
    CHECK_FALSE(r.complete);
    CHECK(r.min_io >= tiny_optimal_schedule(d, 4).min_io);
    CHECK(simulate_counts(r.schedule, MemoryConfig{4}).io_total() == r.min_io);
}
