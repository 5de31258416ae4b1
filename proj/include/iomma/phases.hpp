/**
 * @file phases.hpp
 * @brief Splits an execution trace into phases of M loads/stores and measures
 *        what each phase computed.
 *
 * A phase closes right after its M-th Load/Store; Fma and Evict events that
 * follow stay in the closed phase until the next Load/Store opens a new one.
 * The final phase may hold fewer than M I/Os.
 *
 * For each phase the analyzer counts the distinct A, B and C elements read by
 * its FMAs (x, y, z; C is counted per (i, j) however many partial sums touch
 * it) and checks
 *
 *     fmas^2 <= x * y * z                  (projection bound)
 *     x + y + z <= resident_at_start + loads <= S + M
 */

#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iomma/core.hpp"
#include "iomma/memsim.hpp"

namespace iomma {

struct PhaseConfig {
    Count M = 1;
};

struct PhaseReport {
    Count index = 0;
    Count loads = 0;
    Count stores = 0;
    Count fmas = 0;
    Count x = 0;
    Count y = 0;
    Count z = 0;
    Count resident_at_start = 0;
    double lw_bound = 0.0;

    [[nodiscard]] Count io() const { return loads + stores; }
    [[nodiscard]] Count footprint() const { return x + y + z; }
};

struct Violation {
    std::string what;
};

/// Streaming analyzer. Replays residency with the simulator's rules, so a
/// malformed trace is rejected with UnvalidatedTrace.
class PhaseAnalyzer {
public:
    PhaseAnalyzer(ProblemDims dims, PhaseConfig config, Count capacity = MemoryConfig::unbounded);

    void consume(const TraceEvent& event);

    /// Closes the last phase and checks write-back. Returns every phase.
    std::vector<PhaseReport> finish();

private:
    void open_phase();
    void close_phase();

    ResidencyTracker tracker_;
    PhaseConfig config_;
    std::vector<PhaseReport> reports_;
    std::optional<PhaseReport> current_;
    // slot -> 1 + index of the last phase whose footprint included it
    std::vector<Count> last_seen_;
};

std::vector<PhaseReport> partition_phases(const Schedule& trace, PhaseConfig config,
                                          Count capacity = MemoryConfig::unbounded);

/// Exact integer form of fmas <= sqrt(x y z).
std::optional<Violation> check_loomis_whitney(const PhaseReport& report);

std::optional<Violation> check_capacity(const PhaseReport& report, Count S, Count M);

/// Total FMAs per total I/O. Throws EmptyInput for no phases or zero I/O.
double phase_efficiency(std::span<const PhaseReport> reports);

/// sqrt(S) / 2: the FMA-per-I/O rate an I/O-optimal algorithm approaches.
double ideal_fmas_per_io(Count S);

/// Header `phase,loads,stores,fmas,x,y,z,lw_bound,resident_at_start` then one row per phase.
void write_phase_csv(std::ostream& out, std::span<const PhaseReport> reports);

} // namespace iomma
