/** \file
 * Untimed quantum circuit representation plus the text and JSON circuit
 * parsers and serializers.
 *
 * Text format, one gate per line:
 *
 *     # comment
 *     qubits 5        (optional header; otherwise count = max index + 1)
 *     x q2
 *     cnot q0,q1      (comma or whitespace separated operands)
 *
 * JSON format: { "qubits": N, "gates": [ { "op": "x", "qubits": [2] }, ... ] }
 */
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qsched/common.hpp"

namespace qsched {

struct Gate {
    GateId id = 0;
    std::string opcode;
    std::vector<int> operands;  // qubit indices, non-empty, no duplicates
    Cycle duration_cycles = 1;  // filled from the platform during lowering
};

/// Ordered gate list over a fixed qubit register. Gate ids equal their
/// position in the list; append() keeps that invariant.
class Circuit {
public:
    Circuit() = default;
    explicit Circuit(int qubit_count) : qubit_count_(qubit_count) {}

    /// Validates the gate (non-empty operands, no duplicate operand,
    /// indices inside the register) and assigns the next id.
    void append(std::string_view opcode, std::vector<int> operands);

    int qubit_count() const { return qubit_count_; }
    const std::vector<Gate> &gates() const { return gates_; }
    const Gate &gate(GateId id) const { return gates_[static_cast<size_t>(id)]; }
    size_t size() const { return gates_.size(); }
    bool empty() const { return gates_.empty(); }

    /// Grows the register; never shrinks below the highest used index + 1.
    void set_qubit_count(int count);

    /// Lowering hook: resolves the gate's duration from the platform.
    void set_gate_duration(GateId id, Cycle cycles);

    friend bool operator==(const Circuit &, const Circuit &);

private:
    int qubit_count_ = 0;
    std::vector<Gate> gates_;
};

bool operator==(const Gate &a, const Gate &b);

/// Parses either format (JSON is detected by a leading '{').
/// Throws ParseError with the offending line on malformed input.
Circuit parse_circuit(std::string_view text);
Circuit parse_circuit_file(const std::string &path);

std::string to_text(const Circuit &circuit);
std::string to_json_string(const Circuit &circuit);

} // namespace qsched
