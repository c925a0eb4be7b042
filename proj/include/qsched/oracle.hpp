/** \file
 * Exhaustive branch-and-bound optimal scheduler for small circuits.
 * Ground truth for optimality-gap measurements; shares the validator's
 * legality predicate so "optimal" means exactly what "legal" means
 * elsewhere.
 */
#pragma once

#include "qsched/depgraph.hpp"
#include "qsched/options.hpp"
#include "qsched/schedule.hpp"

namespace qsched {

struct OracleLimits {
    int max_gates = 12;
    Cycle max_makespan = 32;  // bound on the searched horizon
    double timeout_s = 10.0;
};

struct OracleResult {
    Schedule schedule;
    bool proven_optimal = false;
};

/// Minimum-latency schedule satisfying all dependency and stacking rules.
/// Explores start-cycle assignments in topological order with
/// critical-path lower-bound pruning. Throws LimitExceeded when the
/// circuit is over the size limits or the time budget expires.
OracleResult schedule_optimal(const DepGraph &graph, const PlatformConfig &platform,
                              const SchedulerOptions &options = {},
                              const OracleLimits &limits = {});
OracleResult schedule_optimal(const Circuit &circuit, const PlatformConfig &platform,
                              const SchedulerOptions &options = {},
                              const OracleLimits &limits = {});

} // namespace qsched
