/** \file
 * Seeded random circuit generation.
 */
#include "qsched/generator.hpp"

#include <algorithm>
#include <random>

namespace qsched {

namespace {

// 53-bit uniform in [0, 1); pinned to raw mt19937_64 output
double next_unit(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

int next_below(std::mt19937_64 &rng, int n) {
    return static_cast<int>(rng() % static_cast<std::uint64_t>(n));
}

bool is_two_qubit(const std::string &opcode) {
    return opcode == "cnot" || opcode == "cz" || opcode == "swap";
}

} // namespace

std::vector<std::pair<std::string, double>> GeneratorConfig::default_opcode_mix() {
    return {{"x", 0.22}, {"y", 0.22}, {"z", 0.16}, {"h", 0.10},
            {"cnot", 0.20}, {"measure", 0.10}};
}

Circuit generate_circuit(const GeneratorConfig &config) {
    if (config.gates < 0) {
        throw ParseError("gate count must be non-negative");
    }
    if (config.gates > 0 && config.qubits < 1) {
        throw ParseError("qubit count must be positive");
    }
    if (config.opcode_mix.empty()) {
        throw ParseError("opcode mix must not be empty");
    }
    double total = 0.0;
    for (const auto &[opcode, weight] : config.opcode_mix) {
        if (weight <= 0.0) {
            throw ParseError("opcode '" + opcode + "' has a non-positive weight");
        }
        if (is_two_qubit(opcode) && config.qubits < 2) {
            throw ParseError("opcode '" + opcode + "' needs at least 2 qubits");
        }
        total += weight;
    }

    std::mt19937_64 rng(config.seed);
    Circuit circuit(config.gates > 0 ? config.min_qubit + config.qubits : 0);
    for (int k = 0; k < config.gates; ++k) {
        double pick = next_unit(rng) * total;
        const std::string *opcode = &config.opcode_mix.back().first;
        for (const auto &[op, weight] : config.opcode_mix) {
            if (pick < weight) {
                opcode = &op;
                break;
            }
            pick -= weight;
        }
        int a = config.min_qubit + next_below(rng, config.qubits);
        if (is_two_qubit(*opcode)) {
            int b = a;
            while (b == a) {
                b = config.min_qubit + next_below(rng, config.qubits);
            }
            circuit.append(*opcode, {a, b});
        } else {
            circuit.append(*opcode, {a});
        }
    }
    return circuit;
}

std::vector<std::pair<std::string, double>> parse_opcode_mix(const std::string &text) {
    std::vector<std::pair<std::string, double>> mix;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t comma = text.find(',', pos);
        std::string entry =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        pos = comma == std::string::npos ? text.size() : comma + 1;
        size_t colon = entry.find(':');
        if (colon == std::string::npos || colon == 0) {
            throw ParseError("opcode mix entry '" + entry + "' is not '<opcode>:<weight>'");
        }
        try {
            mix.emplace_back(entry.substr(0, colon), std::stod(entry.substr(colon + 1)));
        } catch (const std::exception &) {
            throw ParseError("malformed weight in opcode mix entry '" + entry + "'");
        }
    }
    if (mix.empty()) {
        throw ParseError("empty opcode mix");
    }
    return mix;
}

} // namespace qsched
