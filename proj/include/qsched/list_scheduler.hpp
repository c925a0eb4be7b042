/** \file
 * Resource-constrained list scheduler baseline. Cycle-by-cycle simulation
 * with an ALAP-ascending ready list and the same instrument-sharing
 * semantics as the QSDC pass.
 */
#pragma once

#include "qsched/depgraph.hpp"
#include "qsched/options.hpp"
#include "qsched/schedule.hpp"

namespace qsched {

Schedule schedule_list(const DepGraph &graph, const PlatformConfig &platform,
                       const SchedulerOptions &options = {});
Schedule schedule_list(const Circuit &circuit, const PlatformConfig &platform,
                       const SchedulerOptions &options = {});

} // namespace qsched
