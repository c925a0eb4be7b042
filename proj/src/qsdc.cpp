/** \file
 * QSDC scheduling pass.
 *
 * Pipeline: dependency constraints -> ASAP/ALAP keys -> linear order ->
 * per-instrument resource constraints with same-opcode stacking ->
 * ASAP solve -> group alignment and conflict repair.
 *
 * Resource constraints are inserted along the linear order, so they always
 * point forward and cannot create a negative cycle on their own. The <= 0
 * stacking anchor does not by itself force equal start cycles, and a gate
 * is serialized only against the last instruction seen on its instrument;
 * the alignment/repair stage closes both gaps: group members whose
 * earliest start drifted off the group's are evicted and serialized past
 * it, and remaining same-instrument overlaps are serialized in
 * (start, linear order) order until the schedule is legal.
 */
#include "qsched/qsdc.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <tuple>

#include "qsched/log.hpp"

namespace qsched {

namespace {

// flattened instrument instance index
struct InstanceIndex {
    std::vector<int> offsets;
    int total = 0;

    explicit InstanceIndex(const PlatformConfig &platform) {
        for (const InstrumentType &type : platform.instrument_types()) {
            offsets.push_back(total);
            total += type.count;
        }
    }
    int flat(InstrumentRef ref) const {
        return offsets[static_cast<size_t>(ref.type_index)] + ref.instance;
    }
};

// gates occupying each instance, in linear order
std::vector<std::vector<GateId>> occupants_by_instance(const DepGraph &graph,
                                                       const PlatformConfig &platform,
                                                       const InstanceIndex &index,
                                                       std::span<const GateId> order) {
    std::vector<std::vector<GateId>> occupants(static_cast<size_t>(index.total));
    for (GateId g : order) {
        for (InstrumentRef ref : instruments_for(graph.circuit().gate(g), platform)) {
            occupants[static_cast<size_t>(index.flat(ref))].push_back(g);
        }
    }
    return occupants;
}

ConstraintSystem dependency_system(const DepGraph &graph, const SchedulerOptions &options) {
    ConstraintSystem sys(graph.durations());
    for (const DepEdge &e : graph.edges()) {
        sys.add_dependency(e.src, e.dst, e.weight);
    }
    for (const auto &[a, b, distance] : options.pins) {
        if (a < 0 || b < 0 || a >= sys.var_count() || b >= sys.var_count() || a == b) {
            throw ConfigError("pin references invalid gate ids " + std::to_string(a) + ", " +
                              std::to_string(b));
        }
        sys.pin_relative(a, b, distance);
    }
    return sys;
}

// Fully serialized per-instance constraints; the legal-by-construction
// fallback when the repair sweep cannot converge.
Schedule serial_fallback(const DepGraph &graph, const PlatformConfig &platform,
                         const SchedulerOptions &options, std::span<const GateId> order) {
    ConstraintSystem sys = dependency_system(graph, options);
    InstanceIndex index(platform);
    auto occupants = occupants_by_instance(graph, platform, index, order);
    for (const auto &gates : occupants) {
        for (size_t k = 1; k < gates.size(); ++k) {
            sys.add_dependency(gates[k - 1], gates[k], sys.duration(gates[k - 1]));
        }
    }
    return make_schedule(sys.solve_asap().start, graph);
}

} // namespace

std::vector<GateId> linear_order(const DepGraph &graph, const Solution &asap,
                                 const Solution &alap) {
    std::vector<GateId> order(graph.gate_count());
    for (size_t g = 0; g < order.size(); ++g) {
        order[g] = static_cast<GateId>(g);
    }
    std::sort(order.begin(), order.end(), [&](GateId a, GateId b) {
        return std::tuple(alap.start[static_cast<size_t>(a)], asap.start[static_cast<size_t>(a)],
                          a) < std::tuple(alap.start[static_cast<size_t>(b)],
                                          asap.start[static_cast<size_t>(b)], b);
    });
    return order;
}

void add_resource_constraints_instrument(std::span<const GateId> gates, int max_stacking,
                                         const DepGraph &graph, ConstraintSystem &sys,
                                         InstrumentRef instrument,
                                         std::vector<StackGroup> &groups, QsdcStats &stats) {
    assert(max_stacking >= 1);
    struct Running {
        GateId first;
        GateId last;
        int stack;
        size_t group;
    };
    std::map<std::string, Running, std::less<>> running;
    GateId last_seen = -1;

    auto open_group = [&](const std::string &opcode, GateId g) -> Running {
        groups.push_back({instrument, opcode, {g}});
        return Running{g, g, 1, groups.size() - 1};
    };
    // all resource constraints point forward in the linear order, so the
    // incremental insertions below cannot fail; the maintained solution
    // tells us whether an anchored gate actually lands on its group start
    auto add_forward = [&](DiffConstraint c) {
        bool ok = sys.check_feasible_incremental(c);
        assert(ok);
        (void)ok;
    };
    auto serialize_after = [&](GateId prev, GateId g) {
        add_forward({prev, g, -sys.duration(prev)});
        ++stats.serialization_constraints;
    };

    for (GateId g : gates) {
        const std::string &opcode = graph.circuit().gate(g).opcode;
        auto it = running.find(opcode);
        if (it != running.end()) {
            Running &run = it->second;
            if (run.stack < max_stacking) {
                // anchor to the running group's first variable
                add_forward({run.first, g, 0});
                ++stats.anchor_constraints;
                const auto &start = sys.cached_solution().start;
                if (start[static_cast<size_t>(g)] == start[static_cast<size_t>(run.first)]) {
                    run.stack += 1;
                    run.last = g;
                    groups[run.group].members.push_back(g);
                    assert(run.stack <= max_stacking);
                } else {
                    // the gate cannot share the group's start cycle (its
                    // other constraints hold it later); stacking it would
                    // burn capacity only to be evicted, so serialize it
                    // past the group window and keep the group open
                    serialize_after(run.first, g);
                    ++stats.evictions;
                }
            } else {
                // stack full: serialize after the running instruction
                serialize_after(run.last, g);
                run = open_group(opcode, g);
            }
        } else {
            if (running.empty()) {
                running.emplace(opcode, open_group(opcode, g));
            } else {
                serialize_after(last_seen, g);
                running.emplace(opcode, open_group(opcode, g));
            }
        }
        last_seen = g;
    }
}

std::vector<StackGroup> add_resource_constraints(const DepGraph &graph, ConstraintSystem &sys,
                                                 const PlatformConfig &platform,
                                                 const SchedulerOptions &options,
                                                 std::span<const GateId> order,
                                                 QsdcStats &stats) {
    std::vector<StackGroup> groups;
    InstanceIndex index(platform);
    auto occupants = occupants_by_instance(graph, platform, index, order);
    const auto &types = platform.instrument_types();
    for (int t = 0; t < static_cast<int>(types.size()); ++t) {
        for (int i = 0; i < types[static_cast<size_t>(t)].count; ++i) {
            const auto &gates = occupants[static_cast<size_t>(index.flat({t, i}))];
            if (gates.size() <= 1) {
                continue;
            }
            add_resource_constraints_instrument(
                gates, max_stacking_for(platform, options, t, i), graph, sys, {t, i}, groups,
                stats);
        }
    }
    return groups;
}

void enforce_stack_alignment(ConstraintSystem &sys, std::vector<StackGroup> &groups,
                             const DepGraph &graph, const PlatformConfig &platform,
                             const SchedulerOptions &options, std::span<const GateId> order,
                             QsdcStats &stats) {
    sys.solve_asap();

    // --- phase 1: evict group members that drifted off the group start -----
    // The anchor keeps member >= first, so a member whose ASAP start sits
    // above the group's could only share it by delaying the whole group
    // (an exact pin is either infeasible or raises first). Eviction keeps
    // the group early and serializes the stray member past its window.
    for (StackGroup &group : groups) {
        if (group.members.size() < 2) {
            continue;
        }
        GateId first = group.members.front();
        std::vector<GateId> kept{first};
        for (size_t k = 1; k < group.members.size(); ++k) {
            GateId member = group.members[k];
            const Solution &sol = sys.cached_solution();
            if (sol.start[static_cast<size_t>(member)] == sol.start[static_cast<size_t>(first)]) {
                kept.push_back(member);
                continue;
            }
            if (sys.check_feasible_incremental({first, member, -sys.duration(first)})) {
                ++stats.evictions;
            } else {
                // the system already forces member == first; it is aligned
                kept.push_back(member);
            }
        }
        group.members = std::move(kept);
    }

    // --- phase 2: serialize residual same-instrument conflicts -------------
    InstanceIndex index(platform);
    auto occupants = occupants_by_instance(graph, platform, index, order);
    std::vector<int> position(graph.gate_count(), 0);
    for (size_t p = 0; p < order.size(); ++p) {
        position[static_cast<size_t>(order[p])] = static_cast<int>(p);
    }

    struct Occ {
        GateId gate;
        Cycle start;
        Cycle end;
    };
    constexpr int kMaxRounds = 200;
    bool fallback = false;
    for (int round = 0; round < kMaxRounds && !fallback; ++round) {
        std::vector<DiffConstraint> separations;
        const Solution &sol = sys.cached_solution();
        const auto &types = platform.instrument_types();
        for (int t = 0; t < static_cast<int>(types.size()) && !fallback; ++t) {
            const InstrumentType &type = types[static_cast<size_t>(t)];
            for (int i = 0; i < type.count; ++i) {
                const auto &gates = occupants[static_cast<size_t>(index.flat({t, i}))];
                if (gates.size() <= 1) {
                    continue;
                }
                int capacity = max_stacking_for(platform, options, t, i);
                std::vector<Occ> occ;
                occ.reserve(gates.size());
                for (GateId g : gates) {
                    Cycle s = sol.start[static_cast<size_t>(g)];
                    occ.push_back({g, s, s + sys.duration(g)});
                }
                std::sort(occ.begin(), occ.end(), [&](const Occ &a, const Occ &b) {
                    return std::tuple(a.start, position[static_cast<size_t>(a.gate)]) <
                           std::tuple(b.start, position[static_cast<size_t>(b.gate)]);
                });
                // sweep a legal prefix timeline; conflicting gates are
                // serialized after the latest-ending gate they overlap
                Cycle group_start = -1;
                Cycle group_end = -1;
                GateId group_head = -1;
                GateId latest_end_gate = -1;
                int group_size = 0;
                for (const Occ &o : occ) {
                    if (group_size == 0 || o.start >= group_end) {
                        group_start = o.start;
                        group_end = o.end;
                        group_head = o.gate;
                        latest_end_gate = o.gate;
                        group_size = 1;
                        continue;
                    }
                    bool legal = type.stacking_rule != StackingRule::Exclusive &&
                                 o.start == group_start && group_size + 1 <= capacity;
                    if (legal && type.stacking_rule == StackingRule::SameGateSameStart) {
                        legal = graph.circuit().gate(o.gate).opcode ==
                                graph.circuit().gate(group_head).opcode;
                    }
                    if (legal) {
                        ++group_size;
                        if (o.end > group_end) {
                            group_end = o.end;
                            latest_end_gate = o.gate;
                        }
                    } else {
                        separations.push_back(
                            {latest_end_gate, o.gate, -sys.duration(latest_end_gate)});
                    }
                }
            }
        }
        if (separations.empty()) {
            break;
        }
        for (const DiffConstraint &c : separations) {
            if (!sys.check_feasible_incremental(c)) {
                fallback = true;
                break;
            }
            ++stats.repair_separations;
        }
        ++stats.repair_rounds;
        if (round == kMaxRounds - 1) {
            fallback = true;
        }
    }
    stats.serial_fallback = fallback;
}

QsdcResult schedule_qsdc_detailed(const DepGraph &graph, const PlatformConfig &platform,
                                  const SchedulerOptions &options) {
    QsdcResult result;
    if (graph.gate_count() == 0) {
        result.schedule = Schedule{};
        return result;
    }
    ConstraintSystem sys = dependency_system(graph, options);
    const Solution asap = sys.solve_asap();
    const Solution alap = sys.solve_alap(asap.makespan + options.horizon_slack);
    result.order = linear_order(graph, asap, alap);

    result.groups =
        add_resource_constraints(graph, sys, platform, options, result.order, result.stats);
    sys.solve_asap();  // resource constraints point forward; stays feasible
    enforce_stack_alignment(sys, result.groups, graph, platform, options, result.order,
                            result.stats);

    if (result.stats.serial_fallback) {
        log(LogLevel::Info, "qsdc repair did not converge; using the serialized fallback");
        result.schedule = serial_fallback(graph, platform, options, result.order);
    } else {
        result.schedule = make_schedule(sys.cached_solution().start, graph);
    }
    if (log_enabled(LogLevel::Debug)) {
        log(LogLevel::Debug,
            "qsdc: " + std::to_string(result.stats.anchor_constraints) + " anchors, " +
                std::to_string(result.stats.serialization_constraints) + " serializations, " +
                std::to_string(result.stats.evictions) + " evictions, " +
                std::to_string(result.stats.repair_separations) + " repairs in " +
                std::to_string(result.stats.repair_rounds) + " rounds");
    }
    return result;
}

Schedule schedule_qsdc(const DepGraph &graph, const PlatformConfig &platform,
                       const SchedulerOptions &options) {
    return schedule_qsdc_detailed(graph, platform, options).schedule;
}

Schedule schedule_qsdc(const Circuit &circuit, const PlatformConfig &platform,
                       const SchedulerOptions &options) {
    return schedule_qsdc(build_depgraph(circuit, platform), platform, options);
}

Schedule schedule_asap(const DepGraph &graph, const SchedulerOptions &options) {
    if (graph.gate_count() == 0) {
        return Schedule{};
    }
    ConstraintSystem sys = dependency_system(graph, options);
    return make_schedule(sys.solve_asap().start, graph);
}

} // namespace qsched
