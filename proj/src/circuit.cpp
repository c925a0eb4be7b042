/** \file
 * Circuit construction and the text/JSON circuit parsers.
 */
#include "qsched/circuit.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

namespace qsched {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail_line(int line, const std::string &what) {
    throw ParseError("circuit line " + std::to_string(line) + ": " + what);
}

// "q<i>" -> i
int parse_operand(std::string_view token, int line) {
    if (token.size() < 2 || token[0] != 'q') {
        fail_line(line, "expected qubit operand 'q<i>', got '" + std::string(token) + "'");
    }
    int value = 0;
    for (char c : token.substr(1)) {
        if (c < '0' || c > '9') {
            fail_line(line, "malformed qubit index in '" + std::string(token) + "'");
        }
        if (value > (std::numeric_limits<int>::max() - (c - '0')) / 10) {
            fail_line(line, "qubit index out of range in '" + std::string(token) + "'");
        }
        value = value * 10 + (c - '0');
    }
    return value;
}

std::vector<std::string> tokenize(std::string_view line) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : line) {
        if (c == ' ' || c == '\t' || c == ',') {
            if (!current.empty()) {
                tokens.push_back(std::move(current));
                current.clear();
            }
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) {
        tokens.push_back(std::move(current));
    }
    return tokens;
}

Circuit parse_text(std::string_view text) {
    Circuit circuit;
    bool declared = false;
    int declared_count = 0;
    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        std::string_view line = raw.substr(0, raw.find('#'));
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        auto tokens = tokenize(line);
        if (tokens[0] == "qubits") {
            if (tokens.size() != 2) {
                fail_line(line_no, "header must be 'qubits N'");
            }
            try {
                declared_count = std::stoi(tokens[1]);
            } catch (const std::exception &) {
                fail_line(line_no, "malformed qubit count '" + tokens[1] + "'");
            }
            if (declared_count <= 0) {
                fail_line(line_no, "qubit count must be positive");
            }
            declared = true;
            continue;
        }
        if (tokens.size() < 2) {
            fail_line(line_no, "gate needs at least one operand");
        }
        std::vector<int> operands;
        for (size_t i = 1; i < tokens.size(); ++i) {
            operands.push_back(parse_operand(tokens[i], line_no));
        }
        if (declared) {
            for (int q : operands) {
                if (q >= declared_count) {
                    fail_line(line_no, "qubit q" + std::to_string(q) +
                                           " out of declared range (qubits " +
                                           std::to_string(declared_count) + ")");
                }
            }
        }
        try {
            circuit.append(tokens[0], std::move(operands));
        } catch (const ParseError &e) {
            fail_line(line_no, e.what());
        }
    }
    if (declared) {
        circuit.set_qubit_count(declared_count);
    }
    return circuit;
}

Circuit parse_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception &e) {
        throw ParseError(std::string("circuit JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("gates")) {
        throw ParseError("circuit JSON: expected object with a \"gates\" array");
    }
    Circuit circuit;
    int declared = 0;
    if (doc.contains("qubits")) {
        if (!doc["qubits"].is_number_integer() || doc["qubits"].get<int>() < 0) {
            throw ParseError("circuit JSON: \"qubits\" must be a non-negative integer");
        }
        declared = doc["qubits"].get<int>();
    }
    int index = 0;
    for (const auto &g : doc["gates"]) {
        if (!g.is_object() || !g.contains("op") || !g.contains("qubits")) {
            throw ParseError("circuit JSON: gate " + std::to_string(index) +
                             " needs \"op\" and \"qubits\"");
        }
        std::vector<int> operands;
        for (const auto &q : g["qubits"]) {
            if (!q.is_number_integer() || q.get<int>() < 0) {
                throw ParseError("circuit JSON: gate " + std::to_string(index) +
                                 " has a malformed qubit index");
            }
            operands.push_back(q.get<int>());
        }
        if (declared > 0) {
            for (int q : operands) {
                if (q >= declared) {
                    throw ParseError("circuit JSON: gate " + std::to_string(index) +
                                     " uses q" + std::to_string(q) + " outside declared range");
                }
            }
        }
        try {
            circuit.append(g["op"].get<std::string>(), std::move(operands));
        } catch (const ParseError &e) {
            throw ParseError("circuit JSON: gate " + std::to_string(index) + ": " + e.what());
        }
        ++index;
    }
    if (declared > 0) {
        circuit.set_qubit_count(declared);
    }
    return circuit;
}

} // namespace

void Circuit::append(std::string_view opcode, std::vector<int> operands) {
    if (opcode.empty()) {
        throw ParseError("empty opcode");
    }
    if (operands.empty()) {
        throw ParseError("gate '" + std::string(opcode) + "' has no operands");
    }
    std::set<int> seen;
    for (int q : operands) {
        if (q < 0) {
            throw ParseError("negative qubit index");
        }
        if (!seen.insert(q).second) {
            throw ParseError("duplicate operand q" + std::to_string(q) + " in gate '" +
                             std::string(opcode) + "'");
        }
        qubit_count_ = std::max(qubit_count_, q + 1);
    }
    Gate gate;
    gate.id = static_cast<GateId>(gates_.size());
    gate.opcode = std::string(opcode);
    gate.operands = std::move(operands);
    gates_.push_back(std::move(gate));
}

void Circuit::set_qubit_count(int count) {
    qubit_count_ = std::max(qubit_count_, count);
}

void Circuit::set_gate_duration(GateId id, Cycle cycles) {
    gates_[static_cast<size_t>(id)].duration_cycles = cycles;
}

bool operator==(const Gate &a, const Gate &b) {
    return a.id == b.id && a.opcode == b.opcode && a.operands == b.operands;
}

bool operator==(const Circuit &a, const Circuit &b) {
    return a.qubit_count_ == b.qubit_count_ && a.gates_ == b.gates_;
}

Circuit parse_circuit(std::string_view text) {
    std::string_view body = trim(text);
    if (!body.empty() && body.front() == '{') {
        return parse_json(text);
    }
    return parse_text(text);
}

Circuit parse_circuit_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open circuit file: " + path);
    }
    std::ostringstream content;
    content << in.rdbuf();
    return parse_circuit(content.str());
}

std::string to_text(const Circuit &circuit) {
    std::ostringstream out;
    if (circuit.qubit_count() > 0) {
        out << "qubits " << circuit.qubit_count() << "\n";
    }
    for (const Gate &g : circuit.gates()) {
        out << g.opcode;
        for (size_t i = 0; i < g.operands.size(); ++i) {
            out << (i == 0 ? " " : ",") << 'q' << g.operands[i];
        }
        out << "\n";
    }
    return out.str();
}

std::string to_json_string(const Circuit &circuit) {
    json gates = json::array();
    for (const Gate &g : circuit.gates()) {
        gates.push_back({{"op", g.opcode}, {"qubits", g.operands}});
    }
    json doc = {{"qubits", circuit.qubit_count()}, {"gates", std::move(gates)}};
    return doc.dump(2);
}

} // namespace qsched
