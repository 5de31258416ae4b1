#include "doctest.h"

#include <sstream>

#include "iomma/algorithms.hpp"
#include "iomma/core.hpp"
#include "iomma/format.hpp"
#include "iomma/trace_format.hpp"

using namespace iomma;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected iomma::Error");
    return ErrorCode::InvalidArgument;
}

} // namespace

TEST_CASE("fma_count examples") {
    CHECK(fma_count(ProblemDims::make(2, 3, 4)) == 24);
    CHECK(fma_count(ProblemDims::make(1, 1, 1)) == 1);
    CHECK(fma_count(ProblemDims::make(60, 60, 60)) == 216000);
}

TEST_CASE("fma_count is multiplicative in each extent") {
    for (Index m = 1; m <= 6; ++m)
        for (Index n = 1; n <= 6; ++n)
            for (Index k = 1; k <= 6; ++k) {
                const auto d = ProblemDims::make(m, n, k);
                CHECK(fma_count(ProblemDims::make(2 * m, n, k)) == 2 * fma_count(d));
                CHECK(fma_count(ProblemDims::make(m, 3 * n, k)) == 3 * fma_count(d));
                CHECK(fma_count(ProblemDims::make(m, n, 5 * k)) == 5 * fma_count(d));
            }
}

TEST_CASE("ProblemDims rejects non-positive extents") {
    CHECK(code_of([] { ProblemDims::make(0, 1, 1); }) == ErrorCode::InvalidDims);
    CHECK(code_of([] { ProblemDims::make(1, -3, 1); }) == ErrorCode::InvalidDims);
    CHECK(code_of([] { ProblemDims::make(1, 1, 0); }) == ErrorCode::InvalidDims);
    CHECK(code_of([] { ProblemDims::make(1, 1, std::int64_t{1} << 40); }) == ErrorCode::InvalidDims);
}

TEST_CASE("operand shapes") {
    const auto d = ProblemDims::make(2, 3, 4);
    CHECK(rows_of(MatrixId::A, d) == 2);
    CHECK(cols_of(MatrixId::A, d) == 4);
    CHECK(rows_of(MatrixId::B, d) == 4);
    CHECK(cols_of(MatrixId::B, d) == 3);
    CHECK(rows_of(MatrixId::C, d) == 2);
    CHECK(cols_of(MatrixId::C, d) == 3);
}

TEST_CASE("validate_event examples") {
    const auto d = ProblemDims::make(2, 3, 4);
    CHECK_FALSE(validate_event(Fma{1, 2, 3}, d));
    auto oob = validate_event(Fma{2, 0, 0}, d);
    REQUIRE(oob);
    CHECK(oob->coordinate == "i");
    CHECK(oob->value == 2);
    CHECK(oob->limit == 2);
    CHECK(validate_event(Fma{0, 3, 0}, d)->coordinate == "j");
    CHECK(validate_event(Fma{0, 0, 4}, d)->coordinate == "p");
    CHECK_FALSE(validate_event(Load{{MatrixId::A, 1, 3}}, d));
    CHECK(validate_event(Load{{MatrixId::A, 1, 4}}, d));
    CHECK_FALSE(validate_event(Load{{MatrixId::B, 3, 2}}, d));
    CHECK(validate_event(Load{{MatrixId::B, 4, 0}}, d));
    CHECK(validate_event(Store{{MatrixId::C, 0, 3}}, d));
    CHECK(validate_event(Evict{{MatrixId::C, 2, 0}}, d));
}

TEST_CASE("validate_event accepts exactly the in-shape events for dims up to (3,3,3)") {
    const MatrixId ids[] = {MatrixId::A, MatrixId::B, MatrixId::C};
    for (Index m = 1; m <= 3; ++m)
        for (Index n = 1; n <= 3; ++n)
            for (Index k = 1; k <= 3; ++k) {
                const auto d = ProblemDims::make(m, n, k);
                for (Index x = 0; x <= 3; ++x)
                    for (Index y = 0; y <= 3; ++y) {
                        for (Index z = 0; z <= 3; ++z) {
                            const bool in = x < m && y < n && z < k;
                            CHECK(validate_event(Fma{x, y, z}, d).has_value() == !in);
                        }
                        for (auto id : ids) {
                            const Index rows = id == MatrixId::B ? k : m;
                            const Index cols = id == MatrixId::A ? k : n;
                            const bool in = x < rows && y < cols;
                            const OperandRef r{id, x, y};
                            CHECK(validate_event(Load{r}, d).has_value() == !in);
                            CHECK(validate_event(Store{r}, d).has_value() == !in);
                            CHECK(validate_event(Evict{r}, d).has_value() == !in);
                        }
                    }
            }
}

TEST_CASE("describe and format_event") {
    CHECK(describe(Fma{1, 2, 3}) == "Fma(1,2,3)");
    CHECK(describe(Load{{MatrixId::B, 0, 4}}) == "Load(B,0,4)");
    CHECK(format_event(Load{{MatrixId::A, 0, 1}}) == "L A 0 1");
    CHECK(format_event(Store{{MatrixId::C, 2, 3}}) == "S C 2 3");
    CHECK(format_event(Evict{{MatrixId::B, 1, 0}}) == "E B 1 0");
    CHECK(format_event(Fma{4, 5, 6}) == "F 4 5 6");
}

TEST_CASE("trace dump round-trips for every generator") {
    for (auto alg : kAllAlgorithms) {
        const auto d = ProblemDims::make(5, 4, 3);
        const auto s = make_schedule(alg, d, 9);
        std::stringstream ss;
        write_trace(ss, s);
        const auto back = read_trace(ss, d);
        CHECK(back.dims == d);
        CHECK(back.events == s.events);
    }
}

TEST_CASE("trace parser skips comments and blank lines") {
    std::istringstream in("# header\n\nL A 0 0\n  \nF 0 0 0\n# done\n");
    const auto s = read_trace(in, ProblemDims::make(1, 1, 1));
    REQUIRE(s.events.size() == 2);
    CHECK(s.events[0] == TraceEvent{Load{{MatrixId::A, 0, 0}}});
    CHECK(s.events[1] == TraceEvent{Fma{0, 0, 0}});
}

TEST_CASE("trace parser errors name the line") {
    const auto d = ProblemDims::make(2, 2, 2);
    const char* bad[] = {"L A 0 0\nQ 1 2 3\n", "L D 0 0\n", "F 0 0\n", "F 0 0 0 9\n", "L A 0 2\n", "S C -1 0\n"};
    for (const char* text : bad) {
        std::istringstream in(text);
        try {
            read_trace(in, d);
            FAIL("accepted: " << text);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ParseError);
            CHECK(std::string(e.what()).find("line ") != std::string::npos);
        }
    }
}

TEST_CASE("format_double is shortest round-trip") {
    CHECK(format_double(76.0) == "76");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0625) == "1.0625");
    CHECK(format_double(-2.5e-7) == "-2.5e-07");
    const double x = 1.400414937759336;
    CHECK(std::stod(format_double(x)) == x);
}
