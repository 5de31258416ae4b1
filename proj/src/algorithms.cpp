#include "iomma/algorithms.hpp"

#include <algorithm>
#include <atomic>

namespace iomma {

namespace {

std::atomic<int> g_block_offset{0};

Index integer_sqrt(Count s) {
    Count r = 0;
    while ((r + 1) * (r + 1) <= s) ++r;
    return static_cast<Index>(r);
}

Index generator_block(Count S) {
    const int b = static_cast<int>(block_size(S)) + g_block_offset.load();
    return static_cast<Index>(std::max(1, b));
}

OperandRef a_ref(Index i, Index p) { return {MatrixId::A, i, p}; }
OperandRef b_ref(Index p, Index j) { return {MatrixId::B, p, j}; }
OperandRef c_ref(Index i, Index j) { return {MatrixId::C, i, j}; }

void emit_naive(const ProblemDims& d, const EventSink& out) {
    for (Index i = 0; i < d.m; ++i) {
        for (Index j = 0; j < d.n; ++j) {
            for (Index p = 0; p < d.k; ++p) {
                out(Load{a_ref(i, p)});
                out(Load{b_ref(p, j)});
                out(Load{c_ref(i, j)});
                out(Fma{i, j, p});
                out(Store{c_ref(i, j)});
                out(Evict{a_ref(i, p)});
                out(Evict{b_ref(p, j)});
            }
        }
    }
}

// C block resident; one rank-1 update per p.
void emit_alg_c(const ProblemDims& d, Index b, const EventSink& out) {
    const auto grid = BlockGrid::make(d, b);
    for (Index ib = 0; ib < grid.blocks_m(); ++ib) {
        const Index i0 = ib * b, bm = grid.extent_m(ib);
        for (Index jb = 0; jb < grid.blocks_n(); ++jb) {
            const Index j0 = jb * b, bn = grid.extent_n(jb);
            for (Index i = i0; i < i0 + bm; ++i)
                for (Index j = j0; j < j0 + bn; ++j) out(Load{c_ref(i, j)});

            for (Index p = 0; p < d.k; ++p) {
                for (Index i = i0; i < i0 + bm; ++i) out(Load{a_ref(i, p)});
                for (Index j = j0; j < j0 + bn; ++j) out(Load{b_ref(p, j)});
                for (Index i = i0; i < i0 + bm; ++i)
                    for (Index j = j0; j < j0 + bn; ++j) out(Fma{i, j, p});
                for (Index i = i0; i < i0 + bm; ++i) out(Evict{a_ref(i, p)});
                for (Index j = j0; j < j0 + bn; ++j) out(Evict{b_ref(p, j)});
            }

            for (Index i = i0; i < i0 + bm; ++i)
                for (Index j = j0; j < j0 + bn; ++j) out(Store{c_ref(i, j)});
        }
    }
}

// B block resident; rows of A and C streamed. p-blocks outermost.
void emit_alg_b(const ProblemDims& d, Index b, const EventSink& out) {
    const auto grid = BlockGrid::make(d, b);
    for (Index pb = 0; pb < grid.blocks_k(); ++pb) {
        const Index p0 = pb * b, bk = grid.extent_k(pb);
        for (Index jb = 0; jb < grid.blocks_n(); ++jb) {
            const Index j0 = jb * b, bn = grid.extent_n(jb);
            for (Index p = p0; p < p0 + bk; ++p)
                for (Index j = j0; j < j0 + bn; ++j) out(Load{b_ref(p, j)});

            for (Index i = 0; i < d.m; ++i) {
                for (Index p = p0; p < p0 + bk; ++p) out(Load{a_ref(i, p)});
                for (Index j = j0; j < j0 + bn; ++j) out(Load{c_ref(i, j)});
                for (Index j = j0; j < j0 + bn; ++j)
                    for (Index p = p0; p < p0 + bk; ++p) out(Fma{i, j, p});
                for (Index j = j0; j < j0 + bn; ++j) out(Store{c_ref(i, j)});
                for (Index p = p0; p < p0 + bk; ++p) out(Evict{a_ref(i, p)});
            }

            for (Index p = p0; p < p0 + bk; ++p)
                for (Index j = j0; j < j0 + bn; ++j) out(Evict{b_ref(p, j)});
        }
    }
}

// A block resident; columns of B and C streamed. p-blocks innermost.
void emit_alg_a(const ProblemDims& d, Index b, const EventSink& out) {
    const auto grid = BlockGrid::make(d, b);
    for (Index ib = 0; ib < grid.blocks_m(); ++ib) {
        const Index i0 = ib * b, bm = grid.extent_m(ib);
        for (Index pb = 0; pb < grid.blocks_k(); ++pb) {
            const Index p0 = pb * b, bk = grid.extent_k(pb);
            for (Index i = i0; i < i0 + bm; ++i)
                for (Index p = p0; p < p0 + bk; ++p) out(Load{a_ref(i, p)});

            for (Index j = 0; j < d.n; ++j) {
                for (Index p = p0; p < p0 + bk; ++p) out(Load{b_ref(p, j)});
                for (Index i = i0; i < i0 + bm; ++i) out(Load{c_ref(i, j)});
                for (Index i = i0; i < i0 + bm; ++i)
                    for (Index p = p0; p < p0 + bk; ++p) out(Fma{i, j, p});
                for (Index i = i0; i < i0 + bm; ++i) out(Store{c_ref(i, j)});
                for (Index p = p0; p < p0 + bk; ++p) out(Evict{b_ref(p, j)});
            }

            for (Index i = i0; i < i0 + bm; ++i)
                for (Index p = p0; p < p0 + bk; ++p) out(Evict{a_ref(i, p)});
        }
    }
}

Schedule collect(Algorithm alg, const ProblemDims& dims, Count S) {
    Schedule s{dims, {}};
    emit_schedule(alg, dims, S, [&](const TraceEvent& e) { s.events.push_back(e); });
    return s;
}

} // namespace

std::string_view algorithm_name(Algorithm alg) {
    switch (alg) {
        case Algorithm::Naive: return "naive";
        case Algorithm::A: return "alg-a";
        case Algorithm::B: return "alg-b";
        case Algorithm::C: return "alg-c";
    }
    return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
    for (auto alg : kAllAlgorithms) {
        if (algorithm_name(alg) == name) return alg;
    }
    return std::nullopt;
}

Index block_size(Count S) {
    if (S < 4) {
        throw Error(ErrorCode::TooSmall,
                    "S = " + std::to_string(S) + " leaves no room for a block plus one A and one B element (need S >= 4)");
    }
    return std::max<Index>(1, integer_sqrt(S) - 1);
}

BlockGrid BlockGrid::make(const ProblemDims& dims, Index b) {
    if (b == 0) throw Error(ErrorCode::InvalidArgument, "block edge must be positive");
    return BlockGrid{b, dims.m / b, dims.n / b, dims.k / b, dims.m % b, dims.n % b, dims.k % b};
}

void emit_schedule(Algorithm alg, const ProblemDims& dims, Count S, const EventSink& sink) {
    switch (alg) {
        case Algorithm::Naive: emit_naive(dims, sink); return;
        case Algorithm::A: emit_alg_a(dims, generator_block(S), sink); return;
        case Algorithm::B: emit_alg_b(dims, generator_block(S), sink); return;
        case Algorithm::C: emit_alg_c(dims, generator_block(S), sink); return;
    }
}

Schedule naive_schedule(const ProblemDims& dims) { return collect(Algorithm::Naive, dims, 0); }
Schedule algA_schedule(const ProblemDims& dims, Count S) { return collect(Algorithm::A, dims, S); }
Schedule algB_schedule(const ProblemDims& dims, Count S) { return collect(Algorithm::B, dims, S); }
Schedule algC_schedule(const ProblemDims& dims, Count S) { return collect(Algorithm::C, dims, S); }
Schedule make_schedule(Algorithm alg, const ProblemDims& dims, Count S) { return collect(alg, dims, S); }

PredictedIO predicted_io(Algorithm alg, const ProblemDims& dims, Count S) {
    const double m = dims.m, n = dims.n, k = dims.k;
    const double mnk = m * n * k;
    PredictedIO out;

    if (alg == Algorithm::Naive) {
        out.reads = 3 * fma_count(dims);
        out.writes = fma_count(dims);
        out.closed_form_reads = 3.0 * mnk;
        out.closed_form_writes = mnk;
        return out;
    }

    const Index b = block_size(S);
    const auto grid = BlockGrid::make(dims, b);
    const double bd = b;

    switch (alg) {
        case Algorithm::C:
            // per C block: load it, k rank-1 updates of (bm + bn) reads, store it
            for (Index ib = 0; ib < grid.blocks_m(); ++ib) {
                for (Index jb = 0; jb < grid.blocks_n(); ++jb) {
                    const Count bm = grid.extent_m(ib), bn = grid.extent_n(jb);
                    out.reads += bm * bn + Count{dims.k} * (bm + bn);
                    out.writes += bm * bn;
                }
            }
            out.closed_form_reads = 2.0 * mnk / bd + m * n;
            out.closed_form_writes = m * n;
            break;
        case Algorithm::B:
            // per B block: load it, then m rows of (bk of A + bn of C); bn stores per row
            for (Index pb = 0; pb < grid.blocks_k(); ++pb) {
                for (Index jb = 0; jb < grid.blocks_n(); ++jb) {
                    const Count bk = grid.extent_k(pb), bn = grid.extent_n(jb);
                    out.reads += bk * bn + Count{dims.m} * (bk + bn);
                    out.writes += Count{dims.m} * bn;
                }
            }
            out.closed_form_reads = 2.0 * mnk / bd + n * k;
            out.closed_form_writes = mnk / bd;
            break;
        case Algorithm::A:
            // per A block: load it, then n columns of (bk of B + bm of C); bm stores per column
            for (Index ib = 0; ib < grid.blocks_m(); ++ib) {
                for (Index pb = 0; pb < grid.blocks_k(); ++pb) {
                    const Count bm = grid.extent_m(ib), bk = grid.extent_k(pb);
                    out.reads += bm * bk + Count{dims.n} * (bk + bm);
                    out.writes += Count{dims.n} * bm;
                }
            }
            out.closed_form_reads = 2.0 * mnk / bd + m * k;
            out.closed_form_writes = mnk / bd;
            break;
        case Algorithm::Naive:
            break;
    }
    return out;
}

Count predicted_peak_residency(Algorithm alg, const ProblemDims& dims, Count S) {
    if (alg == Algorithm::Naive) return 3;
    const Count b = block_size(S);
    const Count bm = std::min<Count>(b, dims.m), bn = std::min<Count>(b, dims.n), bk = std::min<Count>(b, dims.k);
    switch (alg) {
        case Algorithm::C: return bm * bn + bm + bn;
        case Algorithm::B: return bk * bn + bk + bn;
        case Algorithm::A: return bm * bk + bk + bm;
        case Algorithm::Naive: break;
    }
    return 3;
}

namespace fault {

void set_generator_block_offset(int offset) { g_block_offset.store(offset); }
int generator_block_offset() { return g_block_offset.load(); }

} // namespace fault

} // namespace iomma
