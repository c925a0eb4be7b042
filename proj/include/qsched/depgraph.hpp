/** \file
 * Dependency graph construction: gates become nodes, and each gate depends
 * on the most recent prior gate per operand qubit with an edge weighted by
 * the predecessor's duration.
 */
#pragma once

#include <vector>

#include "qsched/circuit.hpp"
#include "qsched/common.hpp"
#include "qsched/platform.hpp"

namespace qsched {

struct DepEdge {
    GateId src = 0;
    GateId dst = 0;
    Cycle weight = 1;  // duration of src in cycles
};

/// Immutable after construction; safe to share across scheduler runs.
/// Holds a lowered copy of the circuit (durations resolved from the
/// platform instruction set).
class DepGraph {
public:
    DepGraph(Circuit circuit, std::vector<DepEdge> edges);

    const Circuit &circuit() const { return circuit_; }
    const std::vector<DepEdge> &edges() const { return edges_; }
    size_t gate_count() const { return circuit_.size(); }

    const std::vector<std::pair<GateId, Cycle>> &successors(GateId g) const {
        return succ_[static_cast<size_t>(g)];
    }
    const std::vector<std::pair<GateId, Cycle>> &predecessors(GateId g) const {
        return pred_[static_cast<size_t>(g)];
    }

    std::vector<Cycle> durations() const;

private:
    Circuit circuit_;
    std::vector<DepEdge> edges_;
    std::vector<std::vector<std::pair<GateId, Cycle>>> succ_;
    std::vector<std::vector<std::pair<GateId, Cycle>>> pred_;
};

/// Last-writer edges per operand qubit; same-qubit gates are strictly
/// ordered (commutativity is not exploited). Two-qubit gates depend on the
/// most recent gate of each operand.
DepGraph build_depgraph(const Circuit &circuit, const PlatformConfig &platform);

} // namespace qsched
