#include "iomma/tiny_search.hpp"

#include <bit>
#include <unordered_map>
#include <vector>

#include "iomma/algorithms.hpp"

namespace iomma {

namespace {

struct Instance {
    ProblemDims dims;
    Count capacity = 0;
    unsigned operand_count = 0;
    unsigned fma_total = 0;
    std::vector<OperandRef> operands;            // bit index -> element
    std::vector<std::uint32_t> operand_fmas;     // bit index -> mask of FMAs reading it
    std::vector<std::uint32_t> fma_operands;     // fma index -> mask of its three operands
    std::vector<unsigned> fma_c;                 // fma index -> bit of its C element
    std::vector<Fma> fmas;
    std::uint32_t c_mask = 0;
};

Instance build_instance(const ProblemDims& d, Count S) {
    Instance in;
    in.dims = d;
    in.capacity = S;
    const unsigned a_base = 0;
    const unsigned b_base = d.m * d.k;
    const unsigned c_base = b_base + d.k * d.n;
    in.operand_count = c_base + d.m * d.n;
    in.operands.resize(in.operand_count);
    in.operand_fmas.assign(in.operand_count, 0);

    for (Index i = 0; i < d.m; ++i)
        for (Index p = 0; p < d.k; ++p) in.operands[a_base + i * d.k + p] = {MatrixId::A, i, p};
    for (Index p = 0; p < d.k; ++p)
        for (Index j = 0; j < d.n; ++j) in.operands[b_base + p * d.n + j] = {MatrixId::B, p, j};
    for (Index i = 0; i < d.m; ++i)
        for (Index j = 0; j < d.n; ++j) {
            in.operands[c_base + i * d.n + j] = {MatrixId::C, i, j};
            in.c_mask |= 1u << (c_base + i * d.n + j);
        }

    for (Index i = 0; i < d.m; ++i) {
        for (Index j = 0; j < d.n; ++j) {
            for (Index p = 0; p < d.k; ++p) {
                const unsigned f = static_cast<unsigned>(in.fmas.size());
                const unsigned a = a_base + i * d.k + p;
                const unsigned b = b_base + p * d.n + j;
                const unsigned c = c_base + i * d.n + j;
                in.fmas.push_back(Fma{i, j, p});
                in.fma_operands.push_back((1u << a) | (1u << b) | (1u << c));
                in.fma_c.push_back(c);
                in.operand_fmas[a] |= 1u << f;
                in.operand_fmas[b] |= 1u << f;
                in.operand_fmas[c] |= 1u << f;
            }
        }
    }
    in.fma_total = static_cast<unsigned>(in.fmas.size());
    return in;
}

class Search {
public:
    Search(const Instance& in, Count budget) : in_(in), budget_(budget) {}

    void run(Count incumbent, std::vector<TraceEvent> witness) {
        best_ = incumbent;
        best_path_ = std::move(witness);
        dfs(0, 0, 0, 0);
    }

    [[nodiscard]] Count best() const { return best_; }
    [[nodiscard]] bool complete() const { return !aborted_; }
    [[nodiscard]] Count nodes() const { return nodes_; }
    std::vector<TraceEvent> take_witness() { return std::move(best_path_); }

private:
    [[nodiscard]] std::uint32_t all_fmas() const {
        return in_.fma_total == 32 ? ~0u : (1u << in_.fma_total) - 1;
    }

    [[nodiscard]] std::uint32_t needed_operands(std::uint32_t done) const {
        std::uint32_t needed = 0;
        for (std::uint32_t rest = all_fmas() & ~done; rest; rest &= rest - 1) {
            needed |= in_.fma_operands[std::countr_zero(rest)];
        }
        return needed;
    }

    [[nodiscard]] Count lower_bound(std::uint32_t resident, std::uint32_t dirty, std::uint32_t done) const {
        const std::uint32_t needed = needed_operands(done);
        const auto loads = std::popcount(needed & ~resident);
        const auto stores = std::popcount((dirty | needed) & in_.c_mask);
        return static_cast<Count>(loads + stores);
    }

    static std::uint64_t key(std::uint32_t resident, std::uint32_t dirty, std::uint32_t done) {
        // resident/dirty use at most 17 bits, done at most 8
        return std::uint64_t{resident} | (std::uint64_t{done} << 24) | (std::uint64_t{dirty} << 32);
    }

    void dfs(std::uint32_t resident, std::uint32_t dirty, std::uint32_t done, Count g) {
        if (aborted_) return;
        if (done == all_fmas() && dirty == 0) {
            if (g < best_) {
                best_ = g;
                best_path_ = path_;
            }
            return;
        }
        if (g + lower_bound(resident, dirty, done) >= best_) return;

        auto [it, inserted] = seen_.try_emplace(key(resident, dirty, done), g);
        if (!inserted) {
            if (it->second <= g) return;
            it->second = g;
        }

        if (++nodes_ > budget_) {
            aborted_ = true;
            return;
        }

        const std::uint32_t needed = needed_operands(done);
        const auto occupancy = static_cast<Count>(std::popcount(resident));

        // loads
        if (occupancy < in_.capacity) {
            for (std::uint32_t cand = needed & ~resident; cand; cand &= cand - 1) {
                const unsigned bit = std::countr_zero(cand);
                path_.push_back(Load{in_.operands[bit]});
                dfs(resident | (1u << bit), dirty, done, g + 1);
                path_.pop_back();
            }
        }
        // FMAs
        for (std::uint32_t rest = all_fmas() & ~done; rest; rest &= rest - 1) {
            const unsigned f = std::countr_zero(rest);
            if ((in_.fma_operands[f] & resident) != in_.fma_operands[f]) continue;
            path_.push_back(in_.fmas[f]);
            dfs(resident, dirty | (1u << in_.fma_c[f]), done | (1u << f), g);
            path_.pop_back();
        }
        // stores
        for (std::uint32_t cand = dirty; cand; cand &= cand - 1) {
            const unsigned bit = std::countr_zero(cand);
            path_.push_back(Store{in_.operands[bit]});
            dfs(resident & ~(1u << bit), dirty & ~(1u << bit), done, g + 1);
            path_.pop_back();
        }
        // evicts
        for (std::uint32_t cand = resident & ~dirty; cand; cand &= cand - 1) {
            const unsigned bit = std::countr_zero(cand);
            path_.push_back(Evict{in_.operands[bit]});
            dfs(resident & ~(1u << bit), dirty, done, g);
            path_.pop_back();
        }
    }

    const Instance& in_;
    Count budget_;
    Count best_ = 0;
    Count nodes_ = 0;
    bool aborted_ = false;
    std::vector<TraceEvent> path_;
    std::vector<TraceEvent> best_path_;
    std::unordered_map<std::uint64_t, Count> seen_;
};

} // namespace

TinyOptimum tiny_optimal_schedule(const ProblemDims& dims, Count S, Count node_budget) {
    if (fma_count(dims) > TinySearchCaps::max_fmas || S > TinySearchCaps::max_S) {
        throw Error(ErrorCode::CapsExceeded, "exhaustive search is capped at mnk <= 8 and S <= 6");
    }
    if (S < 3) throw Error(ErrorCode::TooSmall, "an FMA needs three resident operands (S >= 3)");

    const Instance in = build_instance(dims, S);
    Search search(in, node_budget);

    // Seed the incumbent with the naive schedule, valid for any S >= 3.
    Schedule naive = naive_schedule(dims);
    search.run(4 * fma_count(dims), std::move(naive.events));

    TinyOptimum out;
    out.min_io = search.best();
    out.schedule = Schedule{dims, search.take_witness()};
    out.complete = search.complete();
    out.nodes_expanded = search.nodes();
    return out;
}

} // namespace iomma
