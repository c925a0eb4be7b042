/** \file
 * Dependency graph construction from program order and qubit sharing.
 */
#include "qsched/depgraph.hpp"

#include <algorithm>
#include <tuple>

namespace qsched {

DepGraph::DepGraph(Circuit circuit, std::vector<DepEdge> edges)
    : circuit_(std::move(circuit)), edges_(std::move(edges)) {
    succ_.resize(circuit_.size());
    pred_.resize(circuit_.size());
    for (const DepEdge &e : edges_) {
        succ_[static_cast<size_t>(e.src)].emplace_back(e.dst, e.weight);
        pred_[static_cast<size_t>(e.dst)].emplace_back(e.src, e.weight);
    }
}

std::vector<Cycle> DepGraph::durations() const {
    std::vector<Cycle> result;
    result.reserve(circuit_.size());
    for (const Gate &g : circuit_.gates()) {
        result.push_back(g.duration_cycles);
    }
    return result;
}

DepGraph build_depgraph(const Circuit &circuit, const PlatformConfig &platform) {
    Circuit lowered = circuit;
    for (const Gate &g : circuit.gates()) {
        lowered.set_gate_duration(g.id, platform.duration_cycles(g.opcode));
    }
    std::vector<DepEdge> edges;
    std::vector<GateId> last_writer(static_cast<size_t>(lowered.qubit_count()), -1);
    for (const Gate &g : lowered.gates()) {
        for (int q : g.operands) {
            GateId prev = last_writer[static_cast<size_t>(q)];
            if (prev >= 0) {
                edges.push_back({prev, g.id, lowered.gate(prev).duration_cycles});
            }
            last_writer[static_cast<size_t>(q)] = g.id;
        }
    }
    // a multi-qubit gate whose operands share a last writer yields one edge
    std::sort(edges.begin(), edges.end(), [](const DepEdge &a, const DepEdge &b) {
        return std::tie(a.dst, a.src) < std::tie(b.dst, b.src);
    });
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](const DepEdge &a, const DepEdge &b) {
                                return a.src == b.src && a.dst == b.dst;
                            }),
                edges.end());
    return DepGraph(std::move(lowered), std::move(edges));
}

} // namespace qsched
