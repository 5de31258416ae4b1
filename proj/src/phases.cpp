#include "iomma/phases.hpp"

#include <cmath>
#include <ostream>

#include "iomma/format.hpp"

namespace iomma {

PhaseAnalyzer::PhaseAnalyzer(ProblemDims dims, PhaseConfig config, Count capacity)
    : tracker_(dims, capacity), config_(config) {
    if (config.M < 1) throw Error(ErrorCode::InvalidArgument, "phase budget M must be >= 1");
    last_seen_.assign(tracker_.slot_count(), 0);
}

void PhaseAnalyzer::open_phase() {
    current_ = PhaseReport{};
    current_->index = reports_.size();
    current_->resident_at_start = tracker_.occupancy();
}

void PhaseAnalyzer::close_phase() {
    if (!current_) return;
    auto& r = *current_;
    r.lw_bound = std::sqrt(double(r.x) * double(r.y) * double(r.z));
    reports_.push_back(r);
    current_.reset();
}

void PhaseAnalyzer::consume(const TraceEvent& event) {
    if (current_ && is_io(event) && current_->io() == config_.M) close_phase();
    if (!current_) open_phase();

    try {
        tracker_.apply(event);
    } catch (const Error& e) {
        throw Error(ErrorCode::UnvalidatedTrace, e.what());
    }

    auto& r = *current_;
    const Count stamp = r.index + 1;
    auto touch = [&](const OperandRef& ref, Count& counter) {
        Count& seen = last_seen_[tracker_.slot_index(ref)];
        if (seen != stamp) {
            seen = stamp;
            ++counter;
        }
    };

    if (std::holds_alternative<Load>(event)) {
        ++r.loads;
    } else if (std::holds_alternative<Store>(event)) {
        ++r.stores;
    } else if (const auto* f = std::get_if<Fma>(&event)) {
        ++r.fmas;
        touch({MatrixId::A, f->i, f->p}, r.x);
        touch({MatrixId::B, f->p, f->j}, r.y);
        touch({MatrixId::C, f->i, f->j}, r.z);
    }
}

std::vector<PhaseReport> PhaseAnalyzer::finish() {
    try {
        tracker_.finish();
    } catch (const Error& e) {
        throw Error(ErrorCode::UnvalidatedTrace, e.what());
    }
    close_phase();
    return std::move(reports_);
}

std::vector<PhaseReport> partition_phases(const Schedule& trace, PhaseConfig config, Count capacity) {
    PhaseAnalyzer analyzer(trace.dims, config, capacity);
    for (const auto& e : trace.events) analyzer.consume(e);
    return analyzer.finish();
}

std::optional<Violation> check_loomis_whitney(const PhaseReport& r) {
    using Wide = unsigned __int128;
    const Wide lhs = Wide{r.fmas} * r.fmas;
    const Wide rhs = Wide{r.x} * r.y * r.z;
    if (lhs <= rhs) return std::nullopt;
    return Violation{"phase " + std::to_string(r.index) + ": fmas^2 = " + std::to_string(r.fmas * r.fmas) +
                     " > x*y*z = " + std::to_string(r.x * r.y * r.z)};
}

std::optional<Violation> check_capacity(const PhaseReport& r, Count S, Count M) {
    const Count used = r.footprint();
    if (used > S + M) {
        return Violation{"phase " + std::to_string(r.index) + ": x+y+z = " + std::to_string(used) +
                         " > S+M = " + std::to_string(S + M)};
    }
    if (used > r.resident_at_start + r.loads) {
        return Violation{"phase " + std::to_string(r.index) + ": x+y+z = " + std::to_string(used) +
                         " > resident_at_start+loads = " + std::to_string(r.resident_at_start + r.loads)};
    }
    return std::nullopt;
}

double phase_efficiency(std::span<const PhaseReport> reports) {
    Count fmas = 0, io = 0;
    for (const auto& r : reports) {
        fmas += r.fmas;
        io += r.io();
    }
    if (reports.empty() || io == 0) throw Error(ErrorCode::EmptyInput, "no I/O to measure efficiency against");
    return double(fmas) / double(io);
}

double ideal_fmas_per_io(Count S) { return std::sqrt(double(S)) / 2.0; }

void write_phase_csv(std::ostream& out, std::span<const PhaseReport> reports) {
    out << "phase,loads,stores,fmas,x,y,z,lw_bound,resident_at_start\n";
    for (const auto& r : reports) {
        out << r.index << ',' << r.loads << ',' << r.stores << ',' << r.fmas << ',' << r.x << ',' << r.y << ','
            << r.z << ',' << format_double(r.lw_bound) << ',' << r.resident_at_start << '\n';
    }
}

} // namespace iomma
