/** \file
 * Branch-and-bound optimal scheduler. Start cycles are assigned in program
 * order (a topological order of the dependency graph) with critical-path
 * lower-bound pruning; the incumbent starts as the fully serialized
 * schedule, which is legal on any platform.
 */
#include "qsched/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <string>
#include <vector>

namespace qsched {

namespace {

struct Placed {
    Cycle start;
    Cycle end;
    const std::string *opcode;
};

struct Searcher {
    Searcher(const DepGraph &g, const PlatformConfig &p, const OracleLimits &l)
        : graph(g), platform(p), limits(l) {}

    const DepGraph &graph;
    const PlatformConfig &platform;
    const OracleLimits &limits;
    std::vector<Cycle> dur;
    std::vector<Cycle> tail;  // critical path through the gate, inclusive
    std::vector<std::vector<int>> gate_instances;
    std::vector<std::vector<Placed>> occupied;  // per instance
    std::vector<int> capacity;
    std::vector<StackingRule> rule;
    std::vector<Cycle> start;
    std::vector<Cycle> best_start;
    Cycle best_makespan = 0;
    bool found = false;
    std::chrono::steady_clock::time_point deadline;
    long nodes = 0;

    bool fits(GateId g, Cycle t) const {
        Cycle end = t + dur[static_cast<size_t>(g)];
        const std::string &opcode = graph.circuit().gate(g).opcode;
        for (int inst : gate_instances[static_cast<size_t>(g)]) {
            int stacked = 0;
            for (const Placed &p : occupied[static_cast<size_t>(inst)]) {
                if (p.end <= t || p.start >= end) {
                    continue;
                }
                if (rule[static_cast<size_t>(inst)] == StackingRule::Exclusive ||
                    p.start != t) {
                    return false;
                }
                if (rule[static_cast<size_t>(inst)] == StackingRule::SameGateSameStart &&
                    *p.opcode != opcode) {
                    return false;
                }
                ++stacked;
            }
            if (stacked + 1 > capacity[static_cast<size_t>(inst)]) {
                return false;
            }
        }
        return true;
    }

    void dfs(GateId k, Cycle partial_makespan) {
        if ((++nodes & 1023) == 0 && std::chrono::steady_clock::now() > deadline) {
            throw LimitExceeded("oracle time budget exhausted after " + std::to_string(nodes) +
                                " nodes");
        }
        const auto n = static_cast<GateId>(graph.gate_count());
        if (partial_makespan >= best_makespan) {
            return;
        }
        if (k == n) {
            best_makespan = partial_makespan;
            best_start = start;
            found = true;
            return;
        }
        Cycle earliest = 0;
        for (auto [pred, w] : graph.predecessors(k)) {
            earliest = std::max(earliest, start[static_cast<size_t>(pred)] + w);
        }
        // t + tail(k) must beat the incumbent (max_makespan + 1 until one exists)
        Cycle latest = best_makespan - 1 - tail[static_cast<size_t>(k)];
        for (Cycle t = earliest; t <= latest; ++t) {
            if (!fits(k, t)) {
                continue;
            }
            start[static_cast<size_t>(k)] = t;
            Cycle end = t + dur[static_cast<size_t>(k)];
            for (int inst : gate_instances[static_cast<size_t>(k)]) {
                occupied[static_cast<size_t>(inst)].push_back(
                    {t, end, &graph.circuit().gate(k).opcode});
            }
            dfs(k + 1, std::max(partial_makespan, end));
            for (int inst : gate_instances[static_cast<size_t>(k)]) {
                occupied[static_cast<size_t>(inst)].pop_back();
            }
        }
    }
};

} // namespace

OracleResult schedule_optimal(const DepGraph &graph, const PlatformConfig &platform,
                              const SchedulerOptions &options, const OracleLimits &limits) {
    const auto n = static_cast<GateId>(graph.gate_count());
    if (n == 0) {
        return {Schedule{}, true};
    }
    if (n > limits.max_gates) {
        throw LimitExceeded("circuit has " + std::to_string(n) + " gates, oracle limit is " +
                            std::to_string(limits.max_gates));
    }

    Searcher s(graph, platform, limits);
    s.dur = graph.durations();
    s.tail.assign(static_cast<size_t>(n), 0);
    for (GateId g = n - 1; g >= 0; --g) {
        Cycle suffix = 0;
        for (auto [succ, w] : graph.successors(g)) {
            (void)w;
            suffix = std::max(suffix, s.tail[static_cast<size_t>(succ)]);
        }
        s.tail[static_cast<size_t>(g)] = s.dur[static_cast<size_t>(g)] + suffix;
    }

    int instance_count = 0;
    std::vector<int> type_offset;
    for (const InstrumentType &type : platform.instrument_types()) {
        type_offset.push_back(instance_count);
        for (int i = 0; i < type.count; ++i) {
            s.capacity.push_back(max_stacking_for(
                platform, options, static_cast<int>(type_offset.size()) - 1, i));
            s.rule.push_back(type.stacking_rule);
            ++instance_count;
        }
    }
    s.occupied.resize(static_cast<size_t>(instance_count));
    s.gate_instances.resize(static_cast<size_t>(n));
    for (const Gate &g : graph.circuit().gates()) {
        for (InstrumentRef ref : instruments_for(g, platform)) {
            s.gate_instances[static_cast<size_t>(g.id)].push_back(
                type_offset[static_cast<size_t>(ref.type_index)] + ref.instance);
        }
    }

    // serialized incumbent: gates back to back in program order
    Cycle serial = 0;
    std::vector<Cycle> serial_start(static_cast<size_t>(n));
    for (GateId g = 0; g < n; ++g) {
        serial_start[static_cast<size_t>(g)] = serial;
        serial += s.dur[static_cast<size_t>(g)];
    }
    if (serial <= limits.max_makespan) {
        s.best_start = serial_start;
        s.best_makespan = serial;
        s.found = true;
    } else {
        s.best_makespan = limits.max_makespan + 1;
    }

    s.start.assign(static_cast<size_t>(n), 0);
    s.deadline = std::chrono::steady_clock::now() +
                 std::chrono::microseconds(static_cast<long>(limits.timeout_s * 1e6));
    s.dfs(0, 0);
    if (!s.found) {
        throw LimitExceeded("no schedule within the makespan bound of " +
                            std::to_string(limits.max_makespan) + " cycles");
    }
    return {make_schedule(std::move(s.best_start), graph), true};
}

OracleResult schedule_optimal(const Circuit &circuit, const PlatformConfig &platform,
                              const SchedulerOptions &options, const OracleLimits &limits) {
    return schedule_optimal(build_depgraph(circuit, platform), platform, options, limits);
}

} // namespace qsched
