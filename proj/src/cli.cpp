#include "iomma/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "iomma/algorithms.hpp"
#include "iomma/bounds.hpp"
#include "iomma/format.hpp"
#include "iomma/goto_model.hpp"
#include "iomma/json_io.hpp"
#include "iomma/memsim.hpp"
#include "iomma/phases.hpp"
#include "iomma/random.hpp"
#include "iomma/tiny_search.hpp"
#include "iomma/trace_format.hpp"
#include "iomma/verify.hpp"

namespace iomma::cli {

namespace {

struct Mismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::int64_t m = 0, n = 0, k = 0;
    std::int64_t S = 0;
    std::optional<std::int64_t> M;
    std::string alg;
    std::string format = "json";
    std::string output;
};

void add_dims(CLI::App* cmd, Common& c, bool required = true) {
    auto* m = cmd->add_option("-m", c.m, "rows of C and A");
    auto* n = cmd->add_option("-n", c.n, "columns of C and B");
    auto* k = cmd->add_option("-k", c.k, "inner dimension");
    if (required) {
        m->required();
        n->required();
        k->required();
    }
}

void add_output(CLI::App* cmd, Common& c, const std::string& default_format) {
    cmd->add_option("--format", c.format, "csv or json (default " + default_format + ")")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->preparse_callback([&c, default_format](std::size_t) { c.format = default_format; });
    cmd->add_option("-o,--output", c.output, "write the report to this file instead of stdout");
}

Algorithm require_algorithm(const std::string& name) {
    if (auto alg = parse_algorithm(name)) return *alg;
    throw Error(ErrorCode::InvalidArgument, "unknown algorithm '" + name + "' (naive, alg-a, alg-b, alg-c)");
}

Count require_positive(std::int64_t v, const char* name) {
    if (v < 1) throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be >= 1");
    return static_cast<Count>(v);
}

class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw Error(ErrorCode::InvalidArgument, "cannot open output file " + path);
        }
        out_ = path.empty() ? &fallback : &file_;
    }
    std::ostream& stream() { return *out_; }

private:
    std::ofstream file_;
    std::ostream* out_;
};

void emit_json(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

std::string csv_cell(const Json& v) {
    if (v.is_number_float()) return format_double(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

/// Flat objects become header + one row; nested objects are flattened with '.'.
void emit_csv_record(std::ostream& out, const Json& j) {
    std::vector<std::pair<std::string, Json>> cells;
    std::function<void(const std::string&, const Json&)> flatten = [&](const std::string& prefix, const Json& v) {
        if (v.is_object()) {
            for (auto it = v.begin(); it != v.end(); ++it) {
                flatten(prefix.empty() ? it.key() : prefix + "." + it.key(), it.value());
            }
        } else {
            cells.emplace_back(prefix, v);
        }
    };
    flatten("", j);
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i].first;
    out << '\n';
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_cell(cells[i].second);
    out << '\n';
}

void emit_record(const Common& c, std::ostream& fallback, const Json& j) {
    Sink sink(c.output, fallback);
    if (c.format == "csv") {
        emit_csv_record(sink.stream(), j);
    } else {
        emit_json(sink.stream(), j);
    }
}

// ---------------------------------------------------------------------------

int cmd_simulate(const Common& c, std::uint64_t seed, const std::string& trace_path, std::ostream& out) {
    const auto dims = ProblemDims::make(c.m, c.n, c.k);
    const Count S = require_positive(c.S, "S");
    const auto alg = require_algorithm(c.alg);
    if (S < 3) throw Error(ErrorCode::TooSmall, "an FMA needs three resident operands (S >= 3)");
    const auto predicted = predicted_io(alg, dims, S);  // TooSmall for blocked algorithms with S < 4

    const auto in = random_inputs(dims, seed);
    Schedule schedule = make_schedule(alg, dims, S);
    if (!trace_path.empty()) {
        std::ofstream f(trace_path, std::ios::binary);
        if (!f) throw Error(ErrorCode::InvalidArgument, "cannot open trace file " + trace_path);
        write_trace(f, schedule);
    }

    ExecutionResult result;
    try {
        result = execute(std::move(schedule), MemoryConfig{S}, in.a, in.b, in.c);
    } catch (const Error& e) {
        throw Mismatch(std::string("schedule rejected by simulator: ") + e.what());
    }
    const bool match = result.output_c.bitwise_equal(reference_gemm(in.a, in.b, in.c));
    const bool counts_match = result.stats.reads == predicted.reads && result.stats.writes == predicted.writes &&
                              result.stats.fmas == fma_count(dims);

    Json j;
    j["alg"] = algorithm_name(alg);
    j["dims"] = dims;
    j["S"] = S;
    j["seed"] = seed;
    j["reads"] = result.stats.reads;
    j["writes"] = result.stats.writes;
    j["fmas"] = result.stats.fmas;
    j["peak_residency"] = result.stats.peak_residency;
    j["io_total"] = result.stats.io_total();
    j["predicted"] = predicted;
    j["lower_bound_final"] = lower_bound_final(dims, double(S));
    j["counts_match"] = counts_match;
    j["match"] = match;
    emit_record(c, out, j);
    return match && counts_match ? kExitOk : kExitMismatch;
}

int cmd_predict(const Common& c, std::ostream& out) {
    const auto dims = ProblemDims::make(c.m, c.n, c.k);
    const Count S = require_positive(c.S, "S");
    const auto alg = require_algorithm(c.alg);
    Json j;
    j["alg"] = algorithm_name(alg);
    j["dims"] = dims;
    j["S"] = S;
    j["predicted"] = predicted_io(alg, dims, S);
    if (alg != Algorithm::Naive) j["block_size"] = block_size(S);
    emit_record(c, out, j);
    return kExitOk;
}

int cmd_bounds(const Common& c, std::ostream& out) {
    const auto dims = ProblemDims::make(c.m, c.n, c.k);
    const Count S = require_positive(c.S, "S");
    const Count M = c.M ? require_positive(*c.M, "M") : 2 * S;
    emit_record(c, out, Json(bound_report(dims, S, M)));
    return kExitOk;
}

int cmd_phases(const Common& c, const std::string& trace_in, std::ostream& out, std::ostream& err) {
    const auto dims = ProblemDims::make(c.m, c.n, c.k);
    const Count S = require_positive(c.S, "S");
    const Count M = c.M ? require_positive(*c.M, "M") : 2 * S;

    std::vector<PhaseReport> reports;
    if (!trace_in.empty()) {
        std::ifstream f(trace_in, std::ios::binary);
        if (!f) throw Error(ErrorCode::InvalidArgument, "cannot open trace file " + trace_in);
        const auto trace = read_trace(f, dims);
        try {
            reports = partition_phases(trace, PhaseConfig{M}, S);
        } catch (const Error& e) {
            throw Mismatch(e.what());
        }
    } else {
        if (c.alg.empty()) throw Error(ErrorCode::InvalidArgument, "phases needs --alg or --trace");
        const auto alg = require_algorithm(c.alg);
        if (alg != Algorithm::Naive) block_size(S);
        PhaseAnalyzer analyzer(dims, PhaseConfig{M}, S);
        try {
            emit_schedule(alg, dims, S, [&](const TraceEvent& e) { analyzer.consume(e); });
            reports = analyzer.finish();
        } catch (const Error& e) {
            throw Mismatch(e.what());
        }
    }

    std::size_t violations = 0;
    for (const auto& r : reports) {
        for (auto v : {check_loomis_whitney(r), check_capacity(r, S, M)}) {
            if (v) {
                err << "violation: " << v->what << '\n';
                ++violations;
            }
        }
    }

    Sink sink(c.output, out);
    if (c.format == "csv") {
        write_phase_csv(sink.stream(), reports);
    } else {
        Json j;
        j["dims"] = dims;
        j["S"] = S;
        j["M"] = M;
        j["phases"] = reports;
        j["violations"] = violations;
        if (!reports.empty()) {
            Count io = 0;
            for (const auto& r : reports) io += r.io();
            if (io) j["fmas_per_io"] = phase_efficiency(reports);
        }
        j["ideal_fmas_per_io"] = ideal_fmas_per_io(S);
        emit_json(sink.stream(), j);
    }
    return violations ? kExitMismatch : kExitOk;
}

int cmd_goto(const Common& c, const GotoParams& params, double threshold, std::ostream& out) {
    const auto dims = ProblemDims::make(c.m, c.n, c.k);
    Json j;
    j["dims"] = dims;
    j["params"] = params;
    j["threshold"] = threshold;
    j["report"] = goto_report(dims, params, threshold);
    emit_record(c, out, j);
    return kExitOk;
}

struct SweepRow {
    Algorithm alg;
    ProblemDims dims;
    Count S;
    Count reads = 0;
    Count writes = 0;
    double lb = 0.0;
};

int cmd_sweep(const Common& c, const std::string& algs, const std::string& mnk, const std::string& ms,
              const std::string& ns, const std::string& ks, const std::string& Ss, bool analytic,
              std::ostream& out) {
    std::vector<Algorithm> alg_list;
    {
        std::stringstream ss(algs);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) alg_list.push_back(require_algorithm(item));
        }
    }
    std::vector<ProblemDims> dims_list;
    if (!mnk.empty()) {
        for (auto v : parse_int_list(mnk)) dims_list.push_back(ProblemDims::make(v, v, v));
    } else {
        if (ms.empty() || ns.empty() || ks.empty()) {
            throw Error(ErrorCode::InvalidArgument, "sweep needs --mnk or all of -m, -n, -k");
        }
        for (auto m : parse_int_list(ms))
            for (auto n : parse_int_list(ns))
                for (auto k : parse_int_list(ks)) dims_list.push_back(ProblemDims::make(m, n, k));
    }
    std::vector<Count> s_list;
    for (auto s : parse_int_list(Ss)) s_list.push_back(require_positive(s, "S"));

    std::vector<SweepRow> rows;
    for (auto alg : alg_list)
        for (const auto& d : dims_list)
            for (Count S : s_list) {
                if (alg != Algorithm::Naive) block_size(S);
                else if (S < 3) throw Error(ErrorCode::TooSmall, "naive needs S >= 3");
                rows.push_back(SweepRow{alg, d, S});
            }

    std::atomic<std::size_t> next{0};
    std::vector<std::string> failures(rows.size());
    auto worker = [&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            auto& r = rows[i];
            r.lb = lower_bound_final(r.dims, double(r.S));
            if (analytic) {
                const auto p = predicted_io(r.alg, r.dims, r.S);
                r.reads = p.reads;
                r.writes = p.writes;
                continue;
            }
            try {
                ResidencyTracker tracker(r.dims, r.S);
                emit_schedule(r.alg, r.dims, r.S, [&](const TraceEvent& e) { tracker.apply(e); });
                tracker.finish();
                r.reads = tracker.stats().reads;
                r.writes = tracker.stats().writes;
            } catch (const Error& e) {
                failures[i] = e.what();
            }
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(sweep_threads(), unsigned(rows.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& f : failures) {
        if (!f.empty()) throw Mismatch(f);
    }

    Sink sink(c.output, out);
    auto& os = sink.stream();
    if (c.format == "json") {
        Json arr = Json::array();
        for (const auto& r : rows) {
            Json j;
            j["alg"] = algorithm_name(r.alg);
            j["m"] = r.dims.m;
            j["n"] = r.dims.n;
            j["k"] = r.dims.k;
            j["S"] = r.S;
            j["reads"] = r.reads;
            j["writes"] = r.writes;
            j["io_total"] = r.reads + r.writes;
            j["lb_final"] = r.lb;
            j["ratio"] = r.lb > 0 ? Json(double(r.reads + r.writes) / r.lb) : Json(nullptr);
            arr.push_back(j);
        }
        emit_json(os, arr);
    } else {
        os << "alg,m,n,k,S,reads,writes,io_total,lb_final,ratio\n";
        for (const auto& r : rows) {
            os << algorithm_name(r.alg) << ',' << r.dims.m << ',' << r.dims.n << ',' << r.dims.k << ',' << r.S
               << ',' << r.reads << ',' << r.writes << ',' << (r.reads + r.writes) << ',' << format_double(r.lb)
               << ',';
            if (r.lb > 0) os << format_double(double(r.reads + r.writes) / r.lb);
            os << '\n';
        }
    }
    return kExitOk;
}

int cmd_brute_force(const Common& c, Count budget, const std::string& trace_path, std::ostream& out) {
    const auto dims = ProblemDims::make(c.m, c.n, c.k);
    const Count S = require_positive(c.S, "S");
    const auto res = tiny_optimal_schedule(dims, S, budget);
    if (!trace_path.empty()) {
        std::ofstream f(trace_path, std::ios::binary);
        if (!f) throw Error(ErrorCode::InvalidArgument, "cannot open trace file " + trace_path);
        write_trace(f, res.schedule);
    }
    Json j;
    j["dims"] = dims;
    j["S"] = S;
    j["min_io"] = res.min_io;
    j["complete"] = res.complete;
    j["nodes_expanded"] = res.nodes_expanded;
    j["lower_bound_final"] = lower_bound_final(dims, double(S));
    emit_record(c, out, j);
    return kExitOk;
}

int cmd_verify(bool quick, int fault_offset, std::ostream& out, std::ostream& err) {
    fault::set_generator_block_offset(fault_offset);
    const auto results = run_verify(VerifyOptions{quick, true}, [&](const SuiteResult& r) {
        out << (r.passed ? "pass" : "FAIL") << "  " << r.name << "  (" << r.detail << ")\n";
    });
    fault::set_generator_block_offset(0);
    for (const auto& r : results) {
        if (!r.passed) {
            err << "invariant failed: " << r.name << '\n';
            return kExitMismatch;
        }
    }
    return kExitOk;
}

} // namespace

std::vector<std::int64_t> parse_int_list(std::string_view text) {
    std::vector<std::int64_t> out;
    auto to_int = [&](std::string_view s) {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
            throw Error(ErrorCode::InvalidArgument, "bad integer '" + std::string(s) + "'");
        }
        return v;
    };
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        if (!item.empty()) {
            const auto c1 = item.find(':');
            if (c1 == std::string_view::npos) {
                out.push_back(to_int(item));
            } else {
                const auto rest = item.substr(c1 + 1);
                const auto c2 = rest.find(':');
                const auto lo = to_int(item.substr(0, c1));
                const auto hi = to_int(rest.substr(0, c2));
                const auto step = c2 == std::string_view::npos ? 1 : to_int(rest.substr(c2 + 1));
                if (step < 1) throw Error(ErrorCode::InvalidArgument, "range step must be >= 1");
                for (auto v = lo; v <= hi; v += step) out.push_back(v);
            }
        }
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

unsigned sweep_threads() {
    if (const char* env = std::getenv("IOMMA_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return unsigned(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"I/O cost simulator and lower-bound toolkit for C := AB + C", "iomma"};
    app.require_subcommand(1);

    Common c;
    std::uint64_t seed = 42;
    std::string trace_path, trace_in;
    std::string sweep_algs = "alg-c", sweep_mnk, sweep_m, sweep_n, sweep_k, sweep_S;
    bool analytic = false, quick = false;
    int fault_offset = 0;
    Count budget = 50'000'000;
    GotoParams gp;
    double threshold = kDefaultSuboptimalThreshold;

    auto* simulate = app.add_subcommand("simulate", "execute an algorithm's schedule and check it");
    simulate->add_option("--alg", c.alg, "naive, alg-a, alg-b or alg-c")->required();
    add_dims(simulate, c);
    simulate->add_option("-S", c.S, "fast-memory capacity in scalars")->required();
    simulate->add_option("--seed", seed, "seed for the [-1, 1] input matrices");
    simulate->add_option("--trace", trace_path, "also dump the schedule to this file");
    add_output(simulate, c, "json");

    auto* predict = app.add_subcommand("predict", "structural and closed-form I/O counts");
    predict->add_option("--alg", c.alg, "naive, alg-a, alg-b or alg-c")->required();
    add_dims(predict, c);
    predict->add_option("-S", c.S, "fast-memory capacity in scalars")->required();
    add_output(predict, c, "json");

    auto* bounds = app.add_subcommand("bounds", "evaluate the lower-bound expressions");
    add_dims(bounds, c);
    bounds->add_option("-S", c.S, "fast-memory capacity in scalars")->required();
    bounds->add_option("-M", c.M, "I/Os per phase (default 2S)");
    add_output(bounds, c, "json");

    auto* phases = app.add_subcommand("phases", "split a trace into phases and check each one");
    add_dims(phases, c);
    phases->add_option("-S", c.S, "fast-memory capacity in scalars")->required();
    phases->add_option("-M", c.M, "I/Os per phase (default 2S)");
    phases->add_option("--alg", c.alg, "generate the trace from this algorithm");
    phases->add_option("--trace", trace_in, "read a trace dump instead");
    add_output(phases, c, "csv");

    auto* goto_cmd = app.add_subcommand("goto", "L3/L2 read model of the layered GEMM blocking");
    add_dims(goto_cmd, c);
    goto_cmd->add_option("--nc", gp.n_c, "columns of the B panel kept in L3")->required();
    goto_cmd->add_option("--kc", gp.k_c, "depth of the A block and B panel")->required();
    goto_cmd->add_option("--mc", gp.m_c, "rows of the A block kept in L2")->required();
    goto_cmd->add_option("--nr", gp.n_r, "micro-tile columns (reported only)");
    goto_cmd->add_option("--mr", gp.m_r, "micro-tile rows (reported only)");
    goto_cmd->add_option("--S2", gp.S2, "L2 capacity in scalars")->required();
    goto_cmd->add_option("--S3", gp.S3, "L3 capacity in scalars")->required();
    goto_cmd->add_option("--threshold", threshold, "ratio above which a level is flagged suboptimal");
    add_output(goto_cmd, c, "json");

    auto* sweep = app.add_subcommand("sweep", "cost vs. lower bound over a parameter grid");
    sweep->add_option("--alg", sweep_algs, "comma-separated algorithms");
    sweep->add_option("--mnk", sweep_mnk, "cube sizes m = n = k (list or lo:hi[:step])");
    sweep->add_option("-m", sweep_m, "row counts (list or lo:hi[:step])");
    sweep->add_option("-n", sweep_n, "column counts");
    sweep->add_option("-k", sweep_k, "inner dimensions");
    sweep->add_option("-S", sweep_S, "capacities (list or lo:hi[:step])")->required();
    sweep->add_flag("--analytic", analytic, "use predicted counts instead of simulating");
    add_output(sweep, c, "csv");

    auto* brute = app.add_subcommand("brute-force", "exact minimum I/O for a tiny instance");
    add_dims(brute, c);
    brute->add_option("-S", c.S, "fast-memory capacity in scalars")->required();
    brute->add_option("--budget", budget, "node limit for the search");
    brute->add_option("--trace", trace_path, "dump the witness schedule to this file");
    add_output(brute, c, "json");

    auto* verify = app.add_subcommand("verify", "run the small-scale invariant suite");
    verify->add_flag("--quick", quick, "reduced parameter ranges");
    verify->add_option("--inject-fault", fault_offset)->group("");

    std::vector<std::string> argv(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(argv.begin(), argv.end());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*simulate) return cmd_simulate(c, seed, trace_path, out);
        if (*predict) return cmd_predict(c, out);
        if (*bounds) return cmd_bounds(c, out);
        if (*phases) return cmd_phases(c, trace_in, out, err);
        if (*goto_cmd) return cmd_goto(c, gp, threshold, out);
        if (*sweep) {
            return cmd_sweep(c, sweep_algs, sweep_mnk, sweep_m, sweep_n, sweep_k, sweep_S, analytic, out);
        }
        if (*brute) return cmd_brute_force(c, budget, trace_path, out);
        if (*verify) return cmd_verify(quick, fault_offset, out, err);
    } catch (const Mismatch& e) {
        err << "mismatch: " << e.what() << '\n';
        return kExitMismatch;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace iomma::cli
