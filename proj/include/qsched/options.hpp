/** \file
 * Scheduler options shared by the QSDC pass, the list scheduler, the
 * oracle and the validator, so all four resolve stacking capacity the
 * same way.
 */
#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "qsched/common.hpp"
#include "qsched/platform.hpp"

namespace qsched {

struct SchedulerOptions {
    /// Stacking on shared instruments. Off degrades every instance to
    /// capacity 1 (the qsdc-off / --no-stacking path).
    bool stacking_enabled = true;

    /// Added to the ASAP makespan when computing the ALAP keys.
    Cycle horizon_slack = 0;

    /// Per-instance stacking override, keyed by (type name, instance).
    std::map<std::pair<std::string, int>, int> max_stacking;

    /// Exact-timing pins (gate a, gate b, distance) injected into the
    /// constraint system; CLI escape hatch.
    std::vector<std::tuple<GateId, GateId, Cycle>> pins;
};

/// Capacity of one instrument instance: the override when present, else
/// the instance's connection-set size when stacking is enabled, else 1.
int max_stacking_for(const PlatformConfig &platform, const SchedulerOptions &options,
                     int type_index, int instance);

} // namespace qsched
