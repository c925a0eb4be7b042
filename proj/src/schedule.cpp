/** \file
 * Schedule validation, comparison metrics, Gantt rendering and JSON io.
 */
#include "qsched/schedule.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace qsched {

namespace {

using nlohmann::json;

struct Occupant {
    GateId gate;
    Cycle start;
    Cycle end;
};

std::string gate_label(const Circuit &circuit, GateId id) {
    const Gate &g = circuit.gate(id);
    std::ostringstream out;
    out << g.opcode;
    for (size_t i = 0; i < g.operands.size(); ++i) {
        out << (i == 0 ? " q" : ",q") << g.operands[i];
    }
    out << " (gate " << id << ")";
    return out.str();
}

} // namespace

Schedule make_schedule(std::vector<Cycle> starts, const DepGraph &graph) {
    Schedule s{std::move(starts), 0};
    for (const Gate &g : graph.circuit().gates()) {
        s.latency_cycles =
            std::max(s.latency_cycles, s.start[static_cast<size_t>(g.id)] + g.duration_cycles);
    }
    return s;
}

std::vector<Violation> validate_dependencies(const Schedule &schedule, const DepGraph &graph) {
    std::vector<Violation> violations;
    if (schedule.start.size() != graph.gate_count()) {
        violations.push_back({Violation::Kind::Coverage,
                              "schedule covers " + std::to_string(schedule.start.size()) +
                                  " gates, circuit has " + std::to_string(graph.gate_count()),
                              {}});
        return violations;
    }
    for (GateId g = 0; g < static_cast<GateId>(graph.gate_count()); ++g) {
        if (schedule.start[static_cast<size_t>(g)] < 0) {
            violations.push_back({Violation::Kind::Coverage,
                                  "gate " + std::to_string(g) + " starts before cycle 0",
                                  {g}});
        }
    }
    for (const DepEdge &e : graph.edges()) {
        Cycle gap = schedule.start[static_cast<size_t>(e.dst)] -
                    schedule.start[static_cast<size_t>(e.src)];
        if (gap < e.weight) {
            std::ostringstream msg;
            msg << "dependency " << e.src << " -> " << e.dst << " needs a gap of " << e.weight
                << " cycles, got " << gap;
            violations.push_back({Violation::Kind::Dependency, msg.str(), {e.src, e.dst}});
        }
    }
    return violations;
}

std::vector<Violation> validate(const Schedule &schedule, const DepGraph &graph,
                                const PlatformConfig &platform,
                                const SchedulerOptions &options) {
    std::vector<Violation> violations = validate_dependencies(schedule, graph);
    if (!violations.empty() && violations.front().kind == Violation::Kind::Coverage &&
        schedule.start.size() != graph.gate_count()) {
        return violations;  // resource checks need full coverage
    }
    const Circuit &circuit = graph.circuit();

    // occupants per instrument instance
    std::map<InstrumentRef, std::vector<Occupant>> usage;
    for (const Gate &g : circuit.gates()) {
        Cycle start = schedule.start[static_cast<size_t>(g.id)];
        for (InstrumentRef ref : instruments_for(g, platform)) {
            usage[ref].push_back({g.id, start, start + g.duration_cycles});
        }
    }

    for (auto &[ref, occupants] : usage) {
        const InstrumentType &type = platform.type(ref.type_index);
        int capacity = max_stacking_for(platform, options, ref.type_index, ref.instance);
        std::sort(occupants.begin(), occupants.end(), [](const Occupant &a, const Occupant &b) {
            return std::tie(a.start, a.gate) < std::tie(b.start, b.gate);
        });
        // sweep: overlapping gates must form one group sharing a start
        // cycle (and an opcode for same-gate instruments)
        Cycle group_start = -1;
        Cycle group_end = -1;
        GateId group_head = -1;
        int group_size = 0;
        for (const Occupant &occ : occupants) {
            if (group_size == 0 || occ.start >= group_end) {
                group_start = occ.start;
                group_end = occ.end;
                group_head = occ.gate;
                group_size = 1;
                continue;
            }
            std::ostringstream where;
            where << type.name << '[' << ref.instance << "] at cycle " << occ.start << ": ";
            bool legal = true;
            if (type.stacking_rule == StackingRule::Exclusive) {
                legal = false;
                where << gate_label(circuit, occ.gate) << " overlaps "
                      << gate_label(circuit, group_head) << " on an exclusive instrument";
            } else if (occ.start != group_start) {
                legal = false;
                where << gate_label(circuit, occ.gate) << " overlaps the group started at cycle "
                      << group_start << " without sharing its start";
            } else if (type.stacking_rule == StackingRule::SameGateSameStart &&
                       circuit.gate(occ.gate).opcode != circuit.gate(group_head).opcode) {
                legal = false;
                where << gate_label(circuit, occ.gate) << " and " << gate_label(circuit, group_head)
                      << " share the instrument with different opcodes";
            } else if (group_size + 1 > capacity) {
                legal = false;
                where << "stack of " << (group_size + 1) << " exceeds capacity " << capacity;
            }
            if (!legal) {
                violations.push_back(
                    {Violation::Kind::Resource, where.str(), {group_head, occ.gate}});
            }
            group_end = std::max(group_end, occ.end);
            ++group_size;
        }
    }
    return violations;
}

// --- metrics ----------------------------------------------------------------

std::string format_ratio(double value) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(2) << value;
    return out.str();
}

CompareReport compute_metrics(std::span<const CircuitResult> results,
                              const PlatformConfig &platform) {
    CompareReport report;
    std::vector<std::string> algos;
    for (const CircuitResult &result : results) {
        if (result.platform_hash != platform.hash()) {
            throw ConfigError("compare report mixes platforms: circuit '" + result.name +
                              "' was scheduled against a different config");
        }
        for (const AlgoRun &run : result.runs) {
            if (std::find(algos.begin(), algos.end(), run.algo) == algos.end()) {
                algos.push_back(run.algo);
            }
        }
        report.circuits.push_back(result);
    }
    auto latency_of = [](const CircuitResult &r, const std::string &algo) -> const AlgoRun * {
        for (const AlgoRun &run : r.runs) {
            if (run.algo == algo) {
                return &run;
            }
        }
        return nullptr;
    };
    for (const std::string &a : algos) {
        for (const std::string &b : algos) {
            if (a == b) {
                continue;
            }
            SpeedupRow row;
            row.numerator = a;
            row.denominator = b;
            double log_sum = 0.0;
            int counted = 0;
            for (const CircuitResult &result : report.circuits) {
                const AlgoRun *ra = latency_of(result, a);
                const AlgoRun *rb = latency_of(result, b);
                if (ra == nullptr || rb == nullptr || ra->latency_cycles <= 0 ||
                    rb->latency_cycles <= 0) {
                    continue;
                }
                double ratio = static_cast<double>(rb->latency_cycles) /
                               static_cast<double>(ra->latency_cycles);
                row.per_circuit.push_back(ratio);
                log_sum += std::log(ratio);
                ++counted;
            }
            row.geomean = counted == 0 ? 1.0 : std::exp(log_sum / counted);
            report.speedups.push_back(std::move(row));
        }
    }
    return report;
}

std::string render_table(const CompareReport &report) {
    std::vector<std::array<std::string, 5>> rows;
    rows.push_back({"Benchmark", "Algo", "Latency (cyc)", "Latency (ns)", "Speedup"});
    for (const CircuitResult &result : report.circuits) {
        const AlgoRun *baseline = result.runs.empty() ? nullptr : &result.runs.front();
        for (const AlgoRun &run : result.runs) {
            std::string speedup = "1.00";
            if (baseline != nullptr && run.latency_cycles > 0 && baseline->latency_cycles > 0) {
                speedup = format_ratio(static_cast<double>(baseline->latency_cycles) /
                                       static_cast<double>(run.latency_cycles));
            }
            rows.push_back({result.name, run.algo, std::to_string(run.latency_cycles),
                            std::to_string(run.latency_ns), speedup});
        }
    }
    std::array<size_t, 5> widths{};
    for (const auto &row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            widths[i] = std::max(widths[i], row[i].size());
        }
    }
    std::ostringstream out;
    for (const auto &row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            out << std::left << std::setw(static_cast<int>(widths[i]) + 2) << row[i];
        }
        out << '\n';
    }
    for (const SpeedupRow &row : report.speedups) {
        out << "geomean speedup " << row.numerator << " over " << row.denominator << ": "
            << format_ratio(row.geomean) << '\n';
    }
    return out.str();
}

std::string report_to_json(const CompareReport &report) {
    json circuits = json::array();
    for (const CircuitResult &result : report.circuits) {
        json runs = json::array();
        for (const AlgoRun &run : result.runs) {
            runs.push_back({{"algo", run.algo},
                            {"latency_cycles", run.latency_cycles},
                            {"latency_ns", run.latency_ns},
                            {"wall_ms", run.wall_ms}});
        }
        circuits.push_back({{"name", result.name}, {"runs", std::move(runs)}});
    }
    json speedups = json::array();
    for (const SpeedupRow &row : report.speedups) {
        speedups.push_back({{"numerator", row.numerator},
                            {"denominator", row.denominator},
                            {"per_circuit", row.per_circuit},
                            {"geomean", row.geomean}});
    }
    return json{{"circuits", std::move(circuits)}, {"speedups", std::move(speedups)}}.dump(2);
}

// --- gantt ------------------------------------------------------------------

std::string render_gantt(const Schedule &schedule, const DepGraph &graph,
                         const PlatformConfig &platform) {
    const Circuit &circuit = graph.circuit();
    const Cycle span = schedule.latency_cycles;

    std::vector<std::string> labels;
    std::vector<std::vector<std::string>> cells;  // row x cycle

    auto active_at = [&](const Gate &g, Cycle c) {
        Cycle s = schedule.start[static_cast<size_t>(g.id)];
        return s <= c && c < s + g.duration_cycles;
    };

    const auto &types = platform.instrument_types();
    for (int t = 0; t < static_cast<int>(types.size()); ++t) {
        for (int i = 0; i < types[static_cast<size_t>(t)].count; ++i) {
            labels.push_back(types[static_cast<size_t>(t)].name + "[" + std::to_string(i) + "]");
            std::vector<std::string> row(static_cast<size_t>(span));
            for (Cycle c = 0; c < span; ++c) {
                // group active gates by opcode, program order within
                std::vector<std::pair<std::string, std::string>> groups;
                for (const Gate &g : circuit.gates()) {
                    if (!active_at(g, c)) {
                        continue;
                    }
                    auto refs = instruments_for(g, platform);
                    if (std::find(refs.begin(), refs.end(), InstrumentRef{t, i}) == refs.end()) {
                        continue;
                    }
                    std::string operands;
                    for (size_t k = 0; k < g.operands.size(); ++k) {
                        operands += (k == 0 ? "q" : ",q") + std::to_string(g.operands[k]);
                    }
                    auto it = std::find_if(groups.begin(), groups.end(),
                                           [&](const auto &e) { return e.first == g.opcode; });
                    if (it == groups.end()) {
                        groups.emplace_back(g.opcode, operands);
                    } else {
                        it->second += "," + operands;
                    }
                }
                std::string cell;
                for (const auto &[op, operands] : groups) {
                    if (!cell.empty()) {
                        cell += '|';
                    }
                    cell += op + ":" + operands;
                }
                row[static_cast<size_t>(c)] = std::move(cell);
            }
            cells.push_back(std::move(row));
        }
    }
    for (int q = 0; q < circuit.qubit_count(); ++q) {
        labels.push_back("q" + std::to_string(q));
        std::vector<std::string> row(static_cast<size_t>(span));
        for (Cycle c = 0; c < span; ++c) {
            std::string cell;
            for (const Gate &g : circuit.gates()) {
                if (!active_at(g, c) ||
                    std::find(g.operands.begin(), g.operands.end(), q) == g.operands.end()) {
                    continue;
                }
                if (!cell.empty()) {
                    cell += '|';
                }
                cell += g.opcode;
            }
            row[static_cast<size_t>(c)] = std::move(cell);
        }
        cells.push_back(std::move(row));
    }

    size_t label_width = 0;
    for (const auto &label : labels) {
        label_width = std::max(label_width, label.size());
    }
    std::vector<size_t> col_width(static_cast<size_t>(span), 1);
    for (const auto &row : cells) {
        for (size_t c = 0; c < row.size(); ++c) {
            col_width[c] = std::max(col_width[c], row[c].size());
        }
    }

    std::ostringstream out;
    out << "cycles 0.." << (span > 0 ? span - 1 : 0) << ", latency " << span << " cycles ("
        << schedule.latency_ns(platform) << " ns)\n";
    for (size_t r = 0; r < cells.size(); ++r) {
        out << std::left << std::setw(static_cast<int>(label_width) + 1) << labels[r];
        for (size_t c = 0; c < cells[r].size(); ++c) {
            out << '[' << std::left << std::setw(static_cast<int>(col_width[c]))
                << (cells[r][c].empty() ? "." : cells[r][c]) << ']';
        }
        out << '\n';
    }
    return out.str();
}

// --- schedule json ----------------------------------------------------------

std::string schedule_to_json(const Schedule &schedule, const Circuit &circuit,
                             const PlatformConfig &platform) {
    json starts;
    for (size_t g = 0; g < schedule.start.size(); ++g) {
        starts[std::to_string(g)] = schedule.start[g];
    }
    std::ostringstream hash;
    hash << std::hex << platform.hash();
    json doc = {{"circuit", json::parse(to_json_string(circuit))},
                {"platform_hash", hash.str()},
                {"starts", std::move(starts)},
                {"latency_cycles", schedule.latency_cycles}};
    return doc.dump(2);
}

LoadedSchedule schedule_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception &e) {
        throw ParseError(std::string("schedule JSON: ") + e.what());
    }
    for (const char *key : {"circuit", "platform_hash", "starts", "latency_cycles"}) {
        if (!doc.contains(key)) {
            throw ParseError(std::string("schedule JSON: missing \"") + key + "\"");
        }
    }
    LoadedSchedule loaded;
    loaded.circuit = parse_circuit(doc["circuit"].dump());
    loaded.platform_hash = std::stoull(doc["platform_hash"].get<std::string>(), nullptr, 16);
    loaded.schedule.start.assign(loaded.circuit.size(), 0);
    size_t seen = 0;
    for (auto it = doc["starts"].begin(); it != doc["starts"].end(); ++it) {
        size_t id = std::stoul(it.key());
        if (id >= loaded.circuit.size()) {
            throw ParseError("schedule JSON: start entry for unknown gate " + it.key());
        }
        loaded.schedule.start[id] = it.value().get<Cycle>();
        ++seen;
    }
    if (seen != loaded.circuit.size()) {
        throw ParseError("schedule JSON: starts cover " + std::to_string(seen) + " of " +
                         std::to_string(loaded.circuit.size()) + " gates");
    }
    loaded.schedule.latency_cycles = doc["latency_cycles"].get<Cycle>();
    return loaded;
}

} // namespace qsched
