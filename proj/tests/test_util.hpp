/** \file
 * Shared helpers for the test suites: bundled inputs, a brute-force
 * exhaustive scheduler used as the independent oracle for small cases, and
 * a longest-path reference for dependency-only schedules.
 */
#pragma once

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qsched/circuit.hpp"
#include "qsched/depgraph.hpp"
#include "qsched/options.hpp"
#include "qsched/platform.hpp"
#include "qsched/schedule.hpp"

namespace qsched::test {

inline std::string data_path(const std::string &name) {
    return std::string(QSCHED_DATA_DIR) + "/" + name;
}

inline PlatformConfig s17_platform() {
    return parse_platform_file(data_path("s17.json"));
}

inline Circuit running_example() {
    return parse_circuit("qubits 5\nx q2\ny q3\nx q4\nz q2\n");
}

/// Exhaustive search over all start assignments with start <= start_bound,
/// legality checked by the validator. Independent of every scheduler.
/// Returns the minimum latency, or nullopt when no legal assignment fits.
inline std::optional<Cycle> brute_force_min_latency(const DepGraph &graph,
                                                    const PlatformConfig &platform,
                                                    const SchedulerOptions &options,
                                                    Cycle start_bound,
                                                    std::vector<Cycle> *best_starts = nullptr) {
    const auto n = graph.gate_count();
    std::vector<Cycle> starts(n, 0);
    std::optional<Cycle> best;

    auto recurse = [&](auto &&self, size_t k) -> void {
        if (k == n) {
            Schedule candidate = make_schedule(starts, graph);
            if (best && candidate.latency_cycles >= *best) {
                return;
            }
            if (validate(candidate, graph, platform, options).empty()) {
                best = candidate.latency_cycles;
                if (best_starts != nullptr) {
                    *best_starts = starts;
                }
            }
            return;
        }
        for (Cycle t = 0; t <= start_bound; ++t) {
            starts[k] = t;
            self(self, k + 1);
        }
    };
    recurse(recurse, 0);
    return best;
}

/// Dependency-only component-wise maximum start per gate over all
/// dependency-legal assignments finishing by `horizon`; the reference for
/// solve_alap.
inline std::vector<Cycle> brute_force_alap(const DepGraph &graph, Cycle horizon) {
    const auto n = graph.gate_count();
    std::vector<Cycle> starts(n, 0);
    std::vector<Cycle> maxima(n, -1);

    auto recurse = [&](auto &&self, size_t k) -> void {
        if (k == n) {
            if (!validate_dependencies(make_schedule(starts, graph), graph).empty()) {
                return;
            }
            for (size_t g = 0; g < n; ++g) {
                maxima[g] = std::max(maxima[g], starts[g]);
            }
            return;
        }
        Cycle dur = graph.circuit().gate(static_cast<GateId>(k)).duration_cycles;
        for (Cycle t = 0; t + dur <= horizon; ++t) {
            starts[k] = t;
            self(self, k + 1);
        }
    };
    recurse(recurse, 0);
    return maxima;
}

/// Longest path from graph sources using edge weights; the reference for
/// dependency-only ASAP.
inline std::vector<Cycle> longest_path_starts(const DepGraph &graph) {
    std::vector<Cycle> dist(graph.gate_count(), 0);
    for (size_t g = 0; g < graph.gate_count(); ++g) {  // ids are topological
        for (auto [pred, w] : graph.predecessors(static_cast<GateId>(g))) {
            dist[g] = std::max(dist[g], dist[static_cast<size_t>(pred)] + w);
        }
    }
    return dist;
}

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream content;
    content << in.rdbuf();
    return content.str();
}

} // namespace qsched::test
