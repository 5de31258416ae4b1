#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "iomma/cli.hpp"
#include "iomma/json_io.hpp"

using namespace iomma;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "iomma");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> v;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("iomma_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("simulate alg-c (6,6,6) S = 16") {
    const auto r = run({"simulate", "--alg", "alg-c", "-m", "6", "-n", "6", "-k", "6", "-S", "16"});
    REQUIRE(r.code == cli::kExitOk);
    const auto j = Json::parse(r.out);
    CHECK(j["reads"] == 180);
    CHECK(j["writes"] == 36);
    CHECK(j["fmas"] == 216);
    CHECK(j["peak_residency"] == 15);
    CHECK(j["match"] == true);
    CHECK(j["counts_match"] == true);
}

TEST_CASE("simulate naive (1,1,1) S = 3") {
    const auto r = run({"simulate", "--alg", "naive", "-m", "1", "-n", "1", "-k", "1", "-S", "3"});
    REQUIRE(r.code == cli::kExitOk);
    const auto j = Json::parse(r.out);
    CHECK(j["reads"] == 3);
    CHECK(j["writes"] == 1);
}

TEST_CASE("usage errors exit 1") {
    auto r = run({"simulate", "--alg", "alg-c", "-m", "6", "-n", "6", "-k", "6", "-S", "3"});
    CHECK(r.code == cli::kExitUsage);
    CHECK(r.err.find("TooSmall") != std::string::npos);
    CHECK(run({"simulate", "--alg", "alg-z", "-m", "1", "-n", "1", "-k", "1", "-S", "4"}).code == cli::kExitUsage);
    CHECK(run({"simulate", "--alg", "naive", "-m", "0", "-n", "1", "-k", "1", "-S", "4"}).code == cli::kExitUsage);
    CHECK(run({"bounds", "-m", "1"}).code == cli::kExitUsage);
    CHECK(run({"nonsense"}).code == cli::kExitUsage);
    CHECK(run({"sweep", "--mnk", "1:x", "-S", "16"}).code == cli::kExitUsage);
    CHECK(run({"predict", "--alg", "naive", "-m", "1", "-n", "1", "-k", "1", "-S", "4", "--format", "xml"}).code ==
          cli::kExitUsage);
}

TEST_CASE("int list parsing") {
    CHECK(cli::parse_int_list("1,2,3") == std::vector<std::int64_t>{1, 2, 3});
    CHECK(cli::parse_int_list("4:6") == std::vector<std::int64_t>{4, 5, 6});
    CHECK(cli::parse_int_list("1:9:4,20") == std::vector<std::int64_t>{1, 5, 9, 20});
    CHECK(cli::parse_int_list("5:4").empty());
    CHECK_THROWS_AS(cli::parse_int_list("a"), Error);
    CHECK_THROWS_AS(cli::parse_int_list("1:5:0"), Error);
}

TEST_CASE("sweep alg-c ratios decrease toward 4/3") {
    const auto r = run({"sweep", "--alg", "alg-c", "--mnk", "60,120,240", "-S", "16", "--analytic"});
    REQUIRE(r.code == cli::kExitOk);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 4);
    CHECK(ls[0] == "alg,m,n,k,S,reads,writes,io_total,lb_final,ratio");
    double prev = 1e9;
    for (std::size_t i = 1; i < ls.size(); ++i) {
        const double ratio = std::stod(ls[i].substr(ls[i].rfind(',') + 1));
        CHECK(ratio < prev);
        CHECK(ratio > 4.0 / 3.0);
        prev = ratio;
    }
    CHECK(prev <= 1.45);
}

TEST_CASE("sweep naive ratios sit near 2 sqrt(S)") {
    const auto r = run({"sweep", "--alg", "naive", "--mnk", "60,120,240", "-S", "16"});
    REQUIRE(r.code == cli::kExitOk);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 4);
    for (std::size_t i = 1; i < ls.size(); ++i) {
        const double ratio = std::stod(ls[i].substr(ls[i].rfind(',') + 1));
        CHECK(ratio == doctest::Approx(8.0).epsilon(1e-3));
    }
}

TEST_CASE("sweep: simulated rows equal analytic rows, and blank ratio when the bound is vacuous") {
    const std::vector<std::string> base = {"sweep", "--alg", "naive,alg-a,alg-b,alg-c", "-m", "1:7:3", "-n", "2,5",
                                           "-k", "4",   "-S",    "4,9,16"};
    auto analytic = base;
    analytic.push_back("--analytic");
    const auto sim = run(base);
    const auto ana = run(analytic);
    REQUIRE(sim.code == cli::kExitOk);
    CHECK(sim.out == ana.out);
    const auto ls = lines(sim.out);
    CHECK(ls.size() == 1 + 4 * 3 * 2 * 3);
    bool saw_blank = false;
    for (const auto& l : ls) saw_blank = saw_blank || l.back() == ',';
    CHECK(saw_blank);
}

TEST_CASE("sweep over an empty range prints only the header") {
    const auto r = run({"sweep", "--alg", "alg-c", "--mnk", "5:4", "-S", "16"});
    CHECK(r.code == cli::kExitOk);
    CHECK(r.out == "alg,m,n,k,S,reads,writes,io_total,lb_final,ratio\n");
}

TEST_CASE("sweep output does not depend on thread count") {
    const std::vector<std::string> args = {"sweep", "--alg", "alg-a,alg-c", "--mnk", "1:12", "-S", "4,9,16,25"};
    ::setenv("IOMMA_THREADS", "1", 1);
    CHECK(cli::sweep_threads() == 1);
    const auto serial = run(args);
    ::setenv("IOMMA_THREADS", "8", 1);
    const auto parallel = run(args);
    ::unsetenv("IOMMA_THREADS");
    CHECK(serial.code == cli::kExitOk);
    CHECK(serial.out == parallel.out);
}

TEST_CASE("identical arguments give byte-identical output") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"simulate", "--alg", "alg-b", "-m", "7", "-n", "5", "-k", "3", "-S", "9", "--seed", "11"},
             {"bounds", "-m", "60", "-n", "60", "-k", "60", "-S", "16"},
             {"phases", "--alg", "alg-a", "-m", "5", "-n", "5", "-k", "5", "-S", "9"},
             {"brute-force", "-m", "2", "-n", "1", "-k", "2", "-S", "4"}}) {
        const auto a = run(args), b = run(args);
        CHECK(a.code == cli::kExitOk);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("json output round-trips through the report types") {
    const auto b = run({"bounds", "-m", "60", "-n", "60", "-k", "60", "-S", "16"});
    REQUIRE(b.code == cli::kExitOk);
    const auto bj = Json::parse(b.out);
    const auto report = bj.get<BoundReport>();
    CHECK(report.M == 32);
    CHECK(report.bound_M_eq_2S == 107968.0);
    CHECK(Json(report).dump() == bj.dump());

    const auto g = run({"goto", "-m", "96", "-n", "96", "-k", "96", "--nc", "48", "--kc", "12", "--mc", "12", "--S2",
                        "144", "--S3", "576"});
    REQUIRE(g.code == cli::kExitOk);
    const auto gj = Json::parse(g.out);
    const auto gr = gj.at("report").get<GotoReport>();
    CHECK(gr.l3_reads == 101376.0);
    CHECK(gr.l2_reads == 156672.0);
    CHECK(Json(gr).dump() == gj.at("report").dump());
    CHECK(Json(gj.at("params").get<GotoParams>()).dump() == gj.at("params").dump());

    const auto p = run({"predict", "--alg", "alg-a", "-m", "6", "-n", "6", "-k", "6", "-S", "16"});
    REQUIRE(p.code == cli::kExitOk);
    const auto pj = Json::parse(p.out);
    const auto pr = pj.at("predicted").get<PredictedIO>();
    CHECK(pr.reads == 180);
    CHECK(Json(pr).dump() == pj.at("predicted").dump());

    const auto s = run({"simulate", "--alg", "alg-c", "-m", "4", "-n", "4", "-k", "4", "-S", "9"});
    const auto sj = Json::parse(s.out);
    CHECK(sj.at("dims").get<ProblemDims>() == ProblemDims::make(4, 4, 4));

    const auto ph = run({"phases", "--alg", "alg-c", "-m", "6", "-n", "6", "-k", "6", "-S", "16", "--format", "json"});
    REQUIRE(ph.code == cli::kExitOk);
    const auto phj = Json::parse(ph.out);
    const auto reports = phj.at("phases").get<std::vector<PhaseReport>>();
    CHECK(reports.size() == 7);
    CHECK(Json(reports).dump() == phj.at("phases").dump());
}

TEST_CASE("phases reads a trace dump written by simulate") {
    const auto trace = scratch("alg_c.trace");
    const auto sim = run({"simulate", "--alg", "alg-c", "-m", "6", "-n", "6", "-k", "6", "-S", "16", "--trace",
                          trace.string()});
    REQUIRE(sim.code == cli::kExitOk);
    const auto ph = run({"phases", "-m", "6", "-n", "6", "-k", "6", "-S", "16", "-M", "32", "--trace", trace.string()});
    REQUIRE(ph.code == cli::kExitOk);
    const auto ls = lines(ph.out);
    REQUIRE(ls.size() == 8);
    CHECK(ls[0] == "phase,loads,stores,fmas,x,y,z,lw_bound,resident_at_start");
    CHECK(ls[7].rfind("6,15,9,", 0) == 0);
}

TEST_CASE("phases rejects a malformed trace") {
    const auto trace = scratch("bad.trace");
    std::ofstream(trace) << "F 0 0 0\n";
    const auto r = run({"phases", "-m", "1", "-n", "1", "-k", "1", "-S", "3", "--trace", trace.string()});
    CHECK(r.code != cli::kExitOk);
}

TEST_CASE("output file option") {
    const auto out = scratch("bounds.json");
    const auto r = run({"bounds", "-m", "6", "-n", "6", "-k", "6", "-S", "16", "-o", out.string()});
    REQUIRE(r.code == cli::kExitOk);
    CHECK(r.out.empty());
    std::ifstream in(out);
    const auto j = Json::parse(in);
    CHECK(j["bound_M_eq_2S"] == 76.0);
}

TEST_CASE("brute-force prints the exact optimum") {
    const auto r = run({"brute-force", "-m", "2", "-n", "2", "-k", "1", "-S", "4"});
    REQUIRE(r.code == cli::kExitOk);
    const auto j = Json::parse(r.out);
    CHECK(j["min_io"] == 12);
    CHECK(j["complete"] == true);
    CHECK(run({"brute-force", "-m", "3", "-n", "3", "-k", "3", "-S", "4"}).code == cli::kExitUsage);
}

TEST_CASE("verify passes by default and in quick mode") {
    const auto quick = run({"verify", "--quick"});
    CHECK(quick.code == cli::kExitOk);
    const auto ls = lines(quick.out);
    CHECK(ls.size() >= 6);
    for (const auto& l : ls) CHECK(l.rfind("pass", 0) == 0);

    const auto full = run({"verify"});
    CHECK(full.code == cli::kExitOk);
    CHECK(lines(full.out).size() >= 6);
}

TEST_CASE("an injected block-size fault fails verification") {
    const auto r = run({"verify", "--quick", "--inject-fault", "1"});
    CHECK(r.code == cli::kExitMismatch);
    CHECK(r.err.find("schedule/prediction agreement") != std::string::npos);
    // the hook is reset afterwards
    CHECK(run({"verify", "--quick"}).code == cli::kExitOk);
}
