/** \file
 * Schedule data model, legality validator, comparison metrics, textual
 * Gantt rendering and schedule JSON serialization.
 */
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qsched/common.hpp"
#include "qsched/depgraph.hpp"
#include "qsched/options.hpp"
#include "qsched/platform.hpp"

namespace qsched {

struct Schedule {
    std::vector<Cycle> start;   // indexed by gate id
    Cycle latency_cycles = 0;   // max(start + duration)

    std::int64_t latency_ns(const PlatformConfig &platform) const {
        return latency_cycles * platform.cycle_time_ns();
    }
};

Schedule make_schedule(std::vector<Cycle> starts, const DepGraph &graph);

struct Violation {
    enum class Kind { Coverage, Dependency, Resource };
    Kind kind = Kind::Resource;
    std::string message;
    std::vector<GateId> gates;
};

/// Empty iff the schedule is dependency- and resource-legal. Violations
/// are collected exhaustively, not fail-fast.
std::vector<Violation> validate(const Schedule &schedule, const DepGraph &graph,
                                const PlatformConfig &platform,
                                const SchedulerOptions &options = {});

/// Dependency edges only; for resource-free reference schedules.
std::vector<Violation> validate_dependencies(const Schedule &schedule, const DepGraph &graph);

// --- comparison metrics ----------------------------------------------------

struct AlgoRun {
    std::string algo;
    Cycle latency_cycles = 0;
    std::int64_t latency_ns = 0;
    double wall_ms = 0.0;
};

struct CircuitResult {
    std::string name;
    std::uint64_t platform_hash = 0;
    std::vector<AlgoRun> runs;
};

struct SpeedupRow {
    std::string numerator;    // algo A
    std::string denominator;  // algo B; speedup of A over B = latency_B / latency_A
    std::vector<double> per_circuit;
    double geomean = 1.0;
};

struct CompareReport {
    std::vector<CircuitResult> circuits;
    std::vector<SpeedupRow> speedups;  // all ordered algo pairs
};

/// Rejects mixed platform hashes with ConfigError. Circuits with a zero
/// latency on either side are skipped in the ratio aggregates.
CompareReport compute_metrics(std::span<const CircuitResult> results,
                              const PlatformConfig &platform);

/// Two-decimal fixed formatting used everywhere a speedup is printed.
std::string format_ratio(double value);

std::string render_table(const CompareReport &report);
std::string report_to_json(const CompareReport &report);

// --- rendering and serialization -------------------------------------------

/// Fixed-width timeline: one row per instrument instance plus one per
/// qubit, one column per cycle; stacked gates share a column and
/// multi-cycle gates span several.
std::string render_gantt(const Schedule &schedule, const DepGraph &graph,
                         const PlatformConfig &platform);

std::string schedule_to_json(const Schedule &schedule, const Circuit &circuit,
                             const PlatformConfig &platform);

struct LoadedSchedule {
    Schedule schedule;
    Circuit circuit;
    std::uint64_t platform_hash = 0;
};

LoadedSchedule schedule_from_json(std::string_view text);

} // namespace qsched
