/** \file
 * Cycle-by-cycle resource-constrained list scheduler. Ready gates are
 * issued in ALAP-ascending priority; a gate issues when every required
 * instrument is free or hosts a compatible group started this cycle with
 * stacking capacity left.
 */
#include "qsched/list_scheduler.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "qsched/sdc.hpp"

namespace qsched {

namespace {

struct InstanceState {
    Cycle busy_until = 0;
    Cycle group_start = -1;
    std::string group_opcode;
    int group_size = 0;
};

} // namespace

Schedule schedule_list(const DepGraph &graph, const PlatformConfig &platform,
                       const SchedulerOptions &options) {
    const Circuit &circuit = graph.circuit();
    const auto n = static_cast<GateId>(graph.gate_count());
    if (n == 0) {
        return Schedule{};
    }

    // ALAP priority keys from the dependency-only system
    ConstraintSystem sys(graph.durations());
    for (const DepEdge &e : graph.edges()) {
        sys.add_dependency(e.src, e.dst, e.weight);
    }
    const Solution asap = sys.solve_asap();
    const Solution alap = sys.solve_alap(asap.makespan + options.horizon_slack);

    // flattened instrument instances and per-gate instance lists
    std::vector<InstanceState> state;
    std::vector<int> type_offset;
    std::vector<int> capacity;
    std::vector<StackingRule> rule;
    for (const InstrumentType &type : platform.instrument_types()) {
        type_offset.push_back(static_cast<int>(state.size()));
        for (int i = 0; i < type.count; ++i) {
            state.emplace_back();
            capacity.push_back(max_stacking_for(
                platform, options, static_cast<int>(type_offset.size()) - 1, i));
            rule.push_back(type.stacking_rule);
        }
    }
    std::vector<std::vector<int>> gate_instances(static_cast<size_t>(n));
    for (const Gate &g : circuit.gates()) {
        for (InstrumentRef ref : instruments_for(g, platform)) {
            gate_instances[static_cast<size_t>(g.id)].push_back(
                type_offset[static_cast<size_t>(ref.type_index)] + ref.instance);
        }
    }

    std::vector<Cycle> start(static_cast<size_t>(n), 0);
    std::vector<int> missing_preds(static_cast<size_t>(n), 0);
    std::vector<Cycle> earliest(static_cast<size_t>(n), 0);
    for (GateId g = 0; g < n; ++g) {
        missing_preds[static_cast<size_t>(g)] =
            static_cast<int>(graph.predecessors(g).size());
    }

    // pending: dependency-complete gates waiting for their earliest cycle;
    // ready: issuable now, ordered by (ALAP, program order)
    std::set<std::pair<Cycle, GateId>> pending;
    std::set<std::pair<Cycle, GateId>> ready;
    for (GateId g = 0; g < n; ++g) {
        if (missing_preds[static_cast<size_t>(g)] == 0) {
            pending.insert({0, g});
        }
    }

    auto can_issue = [&](GateId g, Cycle t) {
        for (int inst : gate_instances[static_cast<size_t>(g)]) {
            const InstanceState &st = state[static_cast<size_t>(inst)];
            if (t >= st.busy_until) {
                continue;
            }
            bool join = st.group_start == t &&
                        rule[static_cast<size_t>(inst)] != StackingRule::Exclusive &&
                        st.group_size + 1 <= capacity[static_cast<size_t>(inst)];
            if (join && rule[static_cast<size_t>(inst)] == StackingRule::SameGateSameStart) {
                join = st.group_opcode == circuit.gate(g).opcode;
            }
            if (!join) {
                return false;
            }
        }
        return true;
    };

    GateId scheduled = 0;
    Cycle t = 0;
    while (scheduled < n) {
        while (!pending.empty() && pending.begin()->first <= t) {
            GateId g = pending.begin()->second;
            pending.erase(pending.begin());
            ready.insert({alap.start[static_cast<size_t>(g)], g});
        }
        for (auto it = ready.begin(); it != ready.end();) {
            GateId g = it->second;
            if (!can_issue(g, t)) {
                ++it;
                continue;
            }
            start[static_cast<size_t>(g)] = t;
            Cycle dur = circuit.gate(g).duration_cycles;
            for (int inst : gate_instances[static_cast<size_t>(g)]) {
                InstanceState &st = state[static_cast<size_t>(inst)];
                if (t >= st.busy_until) {
                    st.group_start = t;
                    st.group_opcode = circuit.gate(g).opcode;
                    st.group_size = 1;
                    st.busy_until = t + dur;
                } else {
                    st.group_size += 1;
                    st.busy_until = std::max(st.busy_until, t + dur);
                }
            }
            for (auto [succ, w] : graph.successors(g)) {
                earliest[static_cast<size_t>(succ)] =
                    std::max(earliest[static_cast<size_t>(succ)], t + w);
                if (--missing_preds[static_cast<size_t>(succ)] == 0) {
                    pending.insert({earliest[static_cast<size_t>(succ)], succ});
                }
            }
            it = ready.erase(it);
            ++scheduled;
        }
        if (scheduled == n) {
            break;
        }
        // jump to the next event: an instrument freeing up or a pending gate
        Cycle next = std::numeric_limits<Cycle>::max();
        if (!ready.empty()) {
            for (const auto &[key, g] : ready) {
                (void)key;
                for (int inst : gate_instances[static_cast<size_t>(g)]) {
                    Cycle busy = state[static_cast<size_t>(inst)].busy_until;
                    if (busy > t) {
                        next = std::min(next, busy);
                    }
                }
            }
        }
        if (!pending.empty()) {
            next = std::min(next, std::max(pending.begin()->first, t + 1));
        }
        t = next;
    }
    return make_schedule(std::move(start), graph);
}

Schedule schedule_list(const Circuit &circuit, const PlatformConfig &platform,
                       const SchedulerOptions &options) {
    return schedule_list(build_depgraph(circuit, platform), platform, options);
}

} // namespace qsched
