/** \file
 * QSDC resource-constrained scheduling pass: builds the dependency
 * constraint system, derives the ALAP/ASAP linear order, adds per-instrument
 * resource constraints with same-opcode stacking, aligns stacked groups to
 * a common start cycle, and repairs residual sharing conflicts.
 */
#pragma once

#include <span>
#include <string>
#include <vector>

#include "qsched/depgraph.hpp"
#include "qsched/options.hpp"
#include "qsched/schedule.hpp"
#include "qsched/sdc.hpp"

namespace qsched {

/// Gates stacked on one instrument instance; all share an opcode and, in
/// the final schedule, a start cycle. `members` is in linear order and
/// starts with the group's defining first gate.
struct StackGroup {
    InstrumentRef instrument;
    std::string opcode;
    std::vector<GateId> members;
};

struct QsdcStats {
    int anchor_constraints = 0;       // <= 0 stacking anchors
    int serialization_constraints = 0;
    int evictions = 0;                // group members that could not align
    int repair_separations = 0;       // legality-sweep serializations
    int repair_rounds = 0;
    bool serial_fallback = false;     // sweep gave up; rebuilt without stacking
};

struct QsdcResult {
    Schedule schedule;
    std::vector<GateId> order;
    std::vector<StackGroup> groups;
    QsdcStats stats;
};

/// Permutation of gate ids sorted ascending by (ALAP start, ASAP start,
/// program order). Deterministic; a topological order of the graph.
std::vector<GateId> linear_order(const DepGraph &graph, const Solution &asap,
                                 const Solution &alap);

/// Adds the resource constraints for every instrument instance whose
/// connected qubits are used by more than one gate, walking the occupying
/// gates in linear order. Returns the stacked groups formed.
std::vector<StackGroup> add_resource_constraints(const DepGraph &graph,
                                                 ConstraintSystem &sys,
                                                 const PlatformConfig &platform,
                                                 const SchedulerOptions &options,
                                                 std::span<const GateId> order,
                                                 QsdcStats &stats);

/// Constraint addition for the gates occupying one instrument instance,
/// in linear order. Same-opcode gates are anchored to the running group's
/// first variable with a <= 0 bound while stacking capacity remains;
/// otherwise gates serialize with a bound of -duration(predecessor).
void add_resource_constraints_instrument(std::span<const GateId> gates,
                                         int max_stacking, const DepGraph &graph,
                                         ConstraintSystem &sys, InstrumentRef instrument,
                                         std::vector<StackGroup> &groups,
                                         QsdcStats &stats);

/// Aligns stacked groups to the hardware's same-start rule: members whose
/// earliest start drifted off the group's are evicted and serialized past
/// the group window (sharing the start would only delay the whole group),
/// then remaining illegal overlaps are serialized per instrument until the
/// schedule validates. Groups are edited in place.
void enforce_stack_alignment(ConstraintSystem &sys, std::vector<StackGroup> &groups,
                             const DepGraph &graph, const PlatformConfig &platform,
                             const SchedulerOptions &options,
                             std::span<const GateId> order, QsdcStats &stats);

QsdcResult schedule_qsdc_detailed(const DepGraph &graph, const PlatformConfig &platform,
                                  const SchedulerOptions &options = {});

Schedule schedule_qsdc(const DepGraph &graph, const PlatformConfig &platform,
                       const SchedulerOptions &options = {});
Schedule schedule_qsdc(const Circuit &circuit, const PlatformConfig &platform,
                       const SchedulerOptions &options = {});

/// Dependency-only ASAP schedule (no resource constraints); reference
/// lower bound for the resource-constrained passes.
Schedule schedule_asap(const DepGraph &graph, const SchedulerOptions &options = {});

} // namespace qsched
