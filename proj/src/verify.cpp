#include "iomma/verify.hpp"

#include <cmath>
#include <sstream>

#include "iomma/algorithms.hpp"
#include "iomma/bounds.hpp"
#include "iomma/goto_model.hpp"
#include "iomma/memsim.hpp"
#include "iomma/phases.hpp"
#include "iomma/random.hpp"
#include "iomma/tiny_search.hpp"

namespace iomma {

namespace {

struct Failure {
    std::string what;
};

std::string tag(Algorithm alg, const ProblemDims& d, Count S) {
    std::ostringstream os;
    os << algorithm_name(alg) << " (" << d.m << "," << d.n << "," << d.k << ") S=" << S;
    return os.str();
}

template <class Fn>
void for_dims(Index lo, Index hi, Fn&& fn) {
    for (Index m = lo; m <= hi; ++m)
        for (Index n = lo; n <= hi; ++n)
            for (Index k = lo; k <= hi; ++k) fn(ProblemDims{m, n, k});
}

bool rel_close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

std::size_t suite_agreement(bool quick) {
    std::size_t cases = 0;
    const Index hi = quick ? 6 : 12;
    for (Count S : {4, 9, 16, 25}) {
        for (auto alg : kAllAlgorithms) {
            for_dims(1, hi, [&](const ProblemDims& d) {
                IOStats got;
                try {
                    got = simulate_counts(make_schedule(alg, d, S), MemoryConfig{S});
                } catch (const Error& e) {
                    throw Failure{tag(alg, d, S) + ": " + e.what()};
                }
                const auto want = predicted_io(alg, d, S);
                if (got.reads != want.reads || got.writes != want.writes || got.fmas != fma_count(d) ||
                    got.peak_residency != predicted_peak_residency(alg, d, S)) {
                    throw Failure{tag(alg, d, S) + ": simulated reads/writes " + std::to_string(got.reads) + "/" +
                                  std::to_string(got.writes) + " vs predicted " + std::to_string(want.reads) +
                                  "/" + std::to_string(want.writes)};
                }
                ++cases;
            });
        }
    }
    return cases;
}

std::size_t suite_closed_forms(bool quick) {
    std::size_t cases = 0;
    const Index reps = quick ? 2 : 4;
    for (Count S : {4, 9, 16, 25, 36}) {
        const Index b = block_size(S);
        for (Index a = 1; a <= reps; ++a)
            for (Index c = 1; c <= reps; ++c)
                for (Index e = 1; e <= reps; ++e) {
                    const ProblemDims d{a * b, c * b, e * b};
                    for (auto alg : kAllAlgorithms) {
                        const auto p = predicted_io(alg, d, S);
                        if (double(p.reads) != p.closed_form_reads || double(p.writes) != p.closed_form_writes) {
                            throw Failure{tag(alg, d, S) + ": structural count differs from closed form"};
                        }
                        if ((alg == Algorithm::A || alg == Algorithm::B) && !p.write_hidden()) {
                            throw Failure{tag(alg, d, S) + ": writes exceed reads"};
                        }
                        ++cases;
                    }
                }
    }
    return cases;
}

std::size_t suite_completeness(bool quick) {
    std::size_t cases = 0;
    const Index hi = quick ? 5 : 8;
    for (Count S : {4, 9, 16}) {
        for (auto alg : kAllAlgorithms) {
            for_dims(1, hi, [&](const ProblemDims& d) {
                std::vector<int> next_p(std::size_t{d.m} * d.n, 0);
                Count fmas = 0;
                emit_schedule(alg, d, S, [&](const TraceEvent& e) {
                    if (const auto* f = std::get_if<Fma>(&e)) {
                        int& want = next_p[std::size_t{f->i} * d.n + f->j];
                        if (int(f->p) != want) throw Failure{tag(alg, d, S) + ": p out of order"};
                        ++want;
                        ++fmas;
                    }
                });
                for (int v : next_p) {
                    if (v != int(d.k)) throw Failure{tag(alg, d, S) + ": missing FMAs"};
                }
                if (fmas != fma_count(d)) throw Failure{tag(alg, d, S) + ": FMA count"};
                ++cases;
            });
        }
    }
    return cases;
}

std::size_t suite_bitwise(bool quick) {
    std::size_t cases = 0;
    const Index hi = quick ? 4 : 8;
    for (Count S : {4, 9, 16}) {
        for_dims(1, hi, [&](const ProblemDims& d) {
            const auto in = random_inputs(d, 42 + d.m * 100 + d.n * 10 + d.k);
            const auto want = reference_gemm(in.a, in.b, in.c);
            for (auto alg : kAllAlgorithms) {
                try {
                    auto res = execute(make_schedule(alg, d, S), MemoryConfig{S}, in.a, in.b, in.c);
                    if (!res.output_c.bitwise_equal(want)) throw Failure{tag(alg, d, S) + ": output differs"};
                } catch (const Error& e) {
                    throw Failure{tag(alg, d, S) + ": " + e.what()};
                }
                ++cases;
            }
        });
    }
    return cases;
}

std::size_t suite_phases(bool quick) {
    std::size_t cases = 0;
    const Index hi = quick ? 4 : 8;
    for (Count S : {4, 9, 16}) {
        for (auto alg : kAllAlgorithms) {
            for_dims(1, hi, [&](const ProblemDims& d) {
                const auto sched = make_schedule(alg, d, S);
                for (Count M : {S, 2 * S}) {
                    const auto reports = partition_phases(sched, PhaseConfig{M}, S);
                    Count fmas = 0;
                    for (std::size_t i = 0; i < reports.size(); ++i) {
                        const auto& r = reports[i];
                        if (auto v = check_loomis_whitney(r)) throw Failure{tag(alg, d, S) + ": " + v->what};
                        if (auto v = check_capacity(r, S, M)) throw Failure{tag(alg, d, S) + ": " + v->what};
                        if (i + 1 < reports.size() && r.io() != M) {
                            throw Failure{tag(alg, d, S) + ": non-final phase without M I/Os"};
                        }
                        fmas += r.fmas;
                    }
                    if (fmas != fma_count(d)) throw Failure{tag(alg, d, S) + ": phase FMA sum"};
                    ++cases;
                }
            });
        }
    }
    return cases;
}

std::size_t suite_bound_identities(bool quick) {
    SplitMix64 rng(7);
    const std::size_t n = quick ? 100 : 1000;
    for (std::size_t c = 0; c < n; ++c) {
        const ProblemDims d{Index(1 + rng.next() % 2000), Index(1 + rng.next() % 2000), Index(1 + rng.next() % 2000)};
        const double S = double(1 + rng.next() % 100000);
        if (!rel_close(lower_bound_general(d, S, 2 * S), lower_bound_final(d, S), 1e-12)) {
            throw Failure{"general(M=2S) != final at S=" + std::to_string(S)};
        }
        if (!rel_close(lower_bound_general(d, S, S), lower_bound_MS(d, S), 1e-12)) {
            throw Failure{"general(M=S) != M=S bound at S=" + std::to_string(S)};
        }
        if (!rel_close(fmax(S, 2 * S), S * std::sqrt(S), 1e-12)) throw Failure{"fmax(S,2S) != S^1.5"};
    }
    if (lower_bound_final({6, 6, 6}, 16) != 76.0) throw Failure{"lower_bound_final((6,6,6),16) != 76"};
    return n;
}

std::size_t suite_xyz_oracle(bool quick) {
    const auto g = grid_search_xyz(16, 32, 1.0);
    const auto a = optimal_xyz(16, 32);
    if (g.x != 16 || g.y != 16 || g.z != 16 || g.f != 64 || a.f != 64 || fmax(16, 32) != 64) {
        throw Failure{"grid/analytic optimum at (16,32) is not (16,16,16), f = 64"};
    }
    SplitMix64 rng(11);
    const std::size_t n = quick ? 5 : 20;
    for (std::size_t c = 0; c < n; ++c) {
        const double S = double(1 + rng.next() % 500), M = double(1 + rng.next() % 1000);
        const auto grid = grid_search_xyz(S, M, (S + M) / 200.0);
        const double exact = fmax(S, M);
        if (std::abs(grid.f - exact) > 0.01 * exact) throw Failure{"grid optimum off by more than 1%"};
    }
    return n + 1;
}

std::size_t suite_optimal_M() {
    std::size_t cases = 0;
    for (double S : {1.0, 4.0, 16.0, 64.0, 256.0, 1024.0}) {
        std::vector<double> grid;
        for (int i = 0; i < 200; ++i) grid.push_back(S / 4 + (8 * S - S / 4) * i / 199.0);
        double nearest = grid[0];
        for (double M : grid) {
            if (std::abs(M - 2 * S) < std::abs(nearest - 2 * S)) nearest = M;
        }
        if (optimal_M(S, grid) != nearest) throw Failure{"optimal M not nearest 2S at S=" + std::to_string(S)};
        if (!rel_close(phase_objective(S, 2 * S), 2.0 / std::sqrt(S), 1e-12)) throw Failure{"g(2S) != 2/sqrt(S)"};
        ++cases;
    }
    return cases;
}

std::size_t suite_tiny(bool quick) {
    struct Case {
        ProblemDims d;
        Count S;
        Count want;
    };
    std::vector<Case> cases = {{{1, 1, 1}, 3, 4}, {{2, 2, 1}, 4, 12}};
    if (!quick) cases.push_back({{1, 2, 2}, 4, 0});
    for (const auto& c : cases) {
        const auto res = tiny_optimal_schedule(c.d, c.S);
        if (!res.complete) throw Failure{"search budget exhausted"};
        if (c.want && res.min_io != c.want) {
            throw Failure{"tiny optimum " + std::to_string(res.min_io) + " != " + std::to_string(c.want)};
        }
        if (double(res.min_io) < lower_bound_final(c.d, double(c.S))) throw Failure{"optimum below lower bound"};
        if (simulate_counts(res.schedule, MemoryConfig{c.S}).io_total() != res.min_io) {
            throw Failure{"witness schedule cost differs from reported optimum"};
        }
        for (auto alg : kAllAlgorithms) {
            if (alg != Algorithm::Naive && c.S < 4) continue;
            if (predicted_io(alg, c.d, c.S).io_total() < res.min_io) {
                throw Failure{std::string(algorithm_name(alg)) + " beats the exhaustive optimum"};
            }
        }
    }
    return cases.size();
}

std::size_t suite_goto() {
    const ProblemDims d{96, 96, 96};
    GotoParams p{48, 12, 12, 4, 4, 144, 576};
    if (l3_reads(d, p) != 101376.0 || l2_reads(d, p) != 156672.0) throw Failure{"Goto formula values"};
    std::size_t cases = 1;
    for (Count b : {2, 3, 5, 8}) {
        const Count S2 = (b + 1) * (b + 1);
        const ProblemDims dd{Index(8 * b), Index(8 * b), Index(8 * b)};
        GotoParams q{1 << 20, b + 1, b + 1, 4, 4, S2, Count(1) << 40};
        const double l2 = l2_reads(dd, q);
        const double alg_a = predicted_io(Algorithm::A, dd, S2).closed_form_reads;
        const double factor = double(b + 1) / double(b);
        if (!(l2 <= alg_a + 1e-9 && alg_a <= l2 * factor + 1e-9)) throw Failure{"L2 formula vs alg-a closed form"};
        ++cases;
    }
    return cases;
}

} // namespace

std::vector<SuiteResult> run_verify(const VerifyOptions& options,
                                    const std::function<void(const SuiteResult&)>& on_result) {
    const bool q = options.quick;
    const std::vector<std::pair<std::string, std::function<std::size_t()>>> suites = {
        {"schedule/prediction agreement", [q] { return suite_agreement(q); }},
        {"divisible closed forms", [q] { return suite_closed_forms(q); }},
        {"schedule completeness", [q] { return suite_completeness(q); }},
        {"bitwise agreement", [q] { return suite_bitwise(q); }},
        {"phase inequalities", [q] { return suite_phases(q); }},
        {"bound identities", [q] { return suite_bound_identities(q); }},
        {"xyz oracle", [q] { return suite_xyz_oracle(q); }},
        {"optimal M", [] { return suite_optimal_M(); }},
        {"tiny exact optimum", [q] { return suite_tiny(q); }},
        {"goto model", [] { return suite_goto(); }},
    };

    std::vector<SuiteResult> results;
    for (const auto& [name, fn] : suites) {
        SuiteResult r{name, false, "", 0};
        try {
            r.cases = fn();
            r.passed = true;
            r.detail = std::to_string(r.cases) + " cases";
        } catch (const Failure& f) {
            r.detail = f.what;
        } catch (const std::exception& e) {
            r.detail = e.what();
        }
        if (on_result) on_result(r);
        results.push_back(r);
        if (!r.passed && options.stop_on_failure) break;
    }
    return results;
}

} // namespace iomma
