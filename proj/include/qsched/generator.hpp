/** \file
 * Seeded random circuit generator for the benchmark harness. Sampling is
 * hand-rolled on raw mt19937_64 output so identical seeds give
 * byte-identical circuits on every platform and standard library.
 */
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qsched/circuit.hpp"

namespace qsched {

struct GeneratorConfig {
    int gates = 10;
    int qubits = 5;
    std::uint64_t seed = 0;
    int min_qubit = 0;  // lowest index used; 1 for 1-based platform maps

    /// Opcode -> weight. Two-qubit opcodes draw two distinct operands.
    std::vector<std::pair<std::string, double>> opcode_mix = default_opcode_mix();

    static std::vector<std::pair<std::string, double>> default_opcode_mix();
};

Circuit generate_circuit(const GeneratorConfig &config);

/// Parses "x:0.5,measure:0.5" into an opcode mix. Throws ParseError.
std::vector<std::pair<std::string, double>> parse_opcode_mix(const std::string &text);

} // namespace qsched
