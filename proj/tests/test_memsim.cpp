#include "doctest.h"

#include <cstring>

#include "iomma/algorithms.hpp"
#include "iomma/memsim.hpp"
#include "iomma/random.hpp"
#include "oracles.hpp"

using namespace iomma;

namespace {

OperandRef A(Index r, Index c) { return {MatrixId::A, r, c}; }
OperandRef B(Index r, Index c) { return {MatrixId::B, r, c}; }
OperandRef C(Index r, Index c) { return {MatrixId::C, r, c}; }

ErrorCode failure_of(const ProblemDims& d, Count S, std::vector<TraceEvent> events) {
    try {
        simulate_counts(Schedule{d, std::move(events)}, MemoryConfig{S});
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("schedule was accepted");
    return ErrorCode::InvalidArgument;
}

} // namespace

TEST_CASE("naive (1,1,2) on S = 3") {
    const auto d = ProblemDims::make(1, 1, 2);
    const auto s = naive_schedule(d);
    const auto stats = simulate_counts(s, MemoryConfig{3});
    CHECK(stats.reads == 6);
    CHECK(stats.writes == 2);
    CHECK(stats.fmas == 2);
    CHECK(stats.peak_residency == 3);
}

TEST_CASE("minimal (1,1,1) schedule costs three reads and one write") {
    const auto d = ProblemDims::make(1, 1, 1);
    const auto stats = simulate_counts(
        Schedule{d, {Load{A(0, 0)}, Load{B(0, 0)}, Load{C(0, 0)}, Fma{0, 0, 0}, Store{C(0, 0)}}}, MemoryConfig{3});
    CHECK(stats == IOStats{3, 1, 1, 3});
}

TEST_CASE("alg-c (6,6,6) on S = 16 against an event recount") {
    const auto s = algC_schedule(ProblemDims::make(6, 6, 6), 16);
    const auto stats = simulate_counts(s, MemoryConfig{16});
    const auto oc = oracle::recount(s);
    CHECK(stats.reads == 180);
    CHECK(stats.writes == 36);
    CHECK(stats.fmas == 216);
    CHECK(stats.peak_residency == 15);
    CHECK(stats.reads == oc.loads);
    CHECK(stats.writes == oc.stores);
    CHECK(stats.fmas == oc.fmas);
    CHECK(stats.peak_residency == oc.peak);
}

TEST_CASE("policy violations") {
    const auto d = ProblemDims::make(2, 2, 2);
    CHECK(failure_of(d, 3, {Fma{0, 0, 0}}) == ErrorCode::NonResidentOperand);
    CHECK(failure_of(d, 3, {Load{A(0, 0)}, Load{B(0, 0)}, Fma{0, 0, 0}}) == ErrorCode::NonResidentOperand);
    CHECK(failure_of(d, 2, {Load{A(0, 0)}, Load{B(0, 0)}, Load{C(0, 0)}}) == ErrorCode::CapacityExceeded);
    CHECK(failure_of(d, 3, {Load{A(0, 0)}, Load{A(0, 0)}}) == ErrorCode::DoubleLoad);
    CHECK(failure_of(d, 3, {Load{A(0, 0)}, Load{B(0, 0)}, Load{C(0, 0)}, Fma{0, 0, 0}, Evict{C(0, 0)}}) ==
          ErrorCode::DirtyEviction);
    CHECK(failure_of(d, 3, {Evict{A(0, 0)}}) == ErrorCode::EvictNonResident);
    CHECK(failure_of(d, 3, {Load{A(0, 0)}, Store{A(0, 0)}}) == ErrorCode::StoreNonC);
    CHECK(failure_of(d, 3, {Load{B(1, 1)}, Store{B(1, 1)}}) == ErrorCode::StoreNonC);
    CHECK(failure_of(d, 3, {Store{C(0, 0)}}) == ErrorCode::StoreNonResident);
    CHECK(failure_of(d, 3, {Load{A(0, 0)}, Load{B(0, 0)}, Load{C(0, 0)}, Fma{0, 0, 0}}) ==
          ErrorCode::IncompleteWriteback);
    CHECK(failure_of(d, 3, {Load{A(2, 0)}}) == ErrorCode::OutOfBounds);
    CHECK(failure_of(d, 3, {Fma{0, 0, 2}}) == ErrorCode::OutOfBounds);
}

TEST_CASE("clean C may be evicted and stored C may be reloaded") {
    const auto d = ProblemDims::make(1, 1, 2);
    const std::vector<TraceEvent> ev = {Load{C(0, 0)}, Evict{C(0, 0)}, Load{A(0, 0)}, Load{B(0, 0)},
                                        Load{C(0, 0)}, Fma{0, 0, 0},   Store{C(0, 0)}, Evict{A(0, 0)},
                                        Evict{B(0, 0)}, Load{A(0, 1)}, Load{B(1, 0)},  Load{C(0, 0)},
                                        Fma{0, 0, 1},  Store{C(0, 0)}};
    DenseMatrix a(1, 2), b(2, 1), c(1, 1, 5.0);
    a(0, 0) = 1, a(0, 1) = 2, b(0, 0) = 3, b(1, 0) = 4;
    const auto r = execute(Schedule{d, ev}, MemoryConfig{3}, a, b, c);
    CHECK(r.output_c(0, 0) == 16.0);
    CHECK(r.stats.reads == 7);
    CHECK(r.stats.writes == 2);
}

TEST_CASE("fast memory only ever holds matrix elements") {
    const auto d = ProblemDims::make(3, 4, 5);
    ResidencyTracker t(d, 10);
    CHECK(t.slot_count() == 3 * 5 + 5 * 4 + 3 * 4);
    CHECK(t.slot_index(A(0, 0)) == 0);
    CHECK(t.slot_index(B(0, 0)) == 15);
    CHECK(t.slot_index(C(2, 3)) == t.slot_count() - 1);
}

TEST_CASE("occupancy never exceeds S at any prefix") {
    for (auto alg : {Algorithm::A, Algorithm::B, Algorithm::C}) {
        for (Count S : {4, 9, 16}) {
            const auto d = ProblemDims::make(7, 5, 6);
            ResidencyTracker t(d, S);
            emit_schedule(alg, d, S, [&](const TraceEvent& e) {
                t.apply(e);
                CHECK(t.occupancy() <= S);
            });
            t.finish();
            CHECK(t.stats().peak_residency <= S);
        }
    }
}

TEST_CASE("stats equal event counts") {
    for (auto alg : kAllAlgorithms)
        for (Index m : {1, 3, 7})
            for (Index k : {1, 4}) {
                const auto d = ProblemDims::make(m, 5, k);
                const auto s = make_schedule(alg, d, 9);
                const auto st = simulate_counts(s, MemoryConfig{9});
                const auto oc = oracle::recount(s);
                CHECK(st.reads == oc.loads);
                CHECK(st.writes == oc.stores);
                CHECK(st.fmas == oc.fmas);
                CHECK(st.fmas == fma_count(d));
                CHECK(st.peak_residency == oc.peak);
            }
}

TEST_CASE("reference_gemm examples") {
    DenseMatrix a(1, 2), b(2, 1), c(1, 1, 5.0);
    a(0, 0) = 1, a(0, 1) = 2, b(0, 0) = 3, b(1, 0) = 4;
    CHECK(reference_gemm(a, b, c)(0, 0) == 16.0);

    const auto in = random_inputs(ProblemDims::make(4, 4, 4), 7);
    const auto id = DenseMatrix::identity(4);
    DenseMatrix zero(4, 4);
    CHECK(reference_gemm(id, in.b, zero).bitwise_equal(in.b));
    const auto plus = reference_gemm(in.a, id, in.c);
    for (Index i = 0; i < 4; ++i)
        for (Index j = 0; j < 4; ++j) CHECK(plus(i, j) == in.c(i, j) + in.a(i, j));
    CHECK_THROWS_AS(reference_gemm(in.a, DenseMatrix(3, 4), zero), Error);
}

TEST_CASE("executed output is bitwise equal to the reference") {
    const auto d = ProblemDims::make(4, 4, 4);
    const auto in = random_inputs(d, 42);
    const auto ref = reference_gemm(in.a, in.b, in.c);
    for (auto alg : kAllAlgorithms) {
        const auto r = execute(make_schedule(alg, d, 9), MemoryConfig{9}, in.a, in.b, in.c);
        CHECK(r.output_c.bitwise_equal(ref));
    }
}

TEST_CASE("bitwise_equal distinguishes signed zero") {
    DenseMatrix x(1, 1, 0.0), y(1, 1, -0.0);
    CHECK(x(0, 0) == y(0, 0));
    CHECK_FALSE(x.bitwise_equal(y));
}

TEST_CASE("executor rejects mismatched operand shapes") {
    const auto d = ProblemDims::make(2, 2, 2);
    try {
        Executor ex(d, MemoryConfig{3}, DenseMatrix(2, 3), DenseMatrix(2, 2), DenseMatrix(2, 2));
        FAIL("accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ShapeMismatch);
    }
}

TEST_CASE("SplitMix64 reference values") {
    // Published splitmix64 outputs for seed 0 and seed 1234567.
    SplitMix64 g0(0);
    CHECK(g0.next() == 0xE220A8397B1DCDAFULL);
    CHECK(g0.next() == 0x6E789E6AA1B965F4ULL);
    SplitMix64 g(1234567);
    CHECK(g.next() == 6457827717110365317ULL);
    CHECK(g.next() == 3203168211198807973ULL);
}

TEST_CASE("random inputs lie in [-1, 1) and fill A, B, C in order") {
    const auto d = ProblemDims::make(3, 2, 4);
    const auto in = random_inputs(d, 99);
    SplitMix64 g(99);
    for (double v : in.a.data()) CHECK(v == g.uniform_pm1());
    for (double v : in.b.data()) CHECK(v == g.uniform_pm1());
    for (double v : in.c.data()) CHECK(v == g.uniform_pm1());
    for (const auto* m : {&in.a, &in.b, &in.c})
        for (double v : m->data()) {
            CHECK(v >= -1.0);
            CHECK(v < 1.0);
        }
}
