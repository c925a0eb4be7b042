/** \file
 * Platform configuration parsing, validation and resource queries.
 */
#include "qsched/platform.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qsched {

namespace {

using nlohmann::json;

StackingRule parse_rule(const std::string &text, const std::string &type_name) {
    if (text == "same_gate_same_start") {
        return StackingRule::SameGateSameStart;
    }
    if (text == "same_start_any_gate") {
        return StackingRule::SameStartAnyGate;
    }
    if (text == "exclusive") {
        return StackingRule::Exclusive;
    }
    throw ConfigError("instrument type '" + type_name + "': unknown stacking_rule '" + text + "'");
}

// S-17 hardware defaults: qwgs share only same gate started at the same
// time, measurement units share anything started at the same time.
StackingRule default_rule(const std::string &name) {
    if (name == "qwgs") {
        return StackingRule::SameGateSameStart;
    }
    if (name == "meas_units") {
        return StackingRule::SameStartAnyGate;
    }
    return StackingRule::Exclusive;
}

std::string default_class(const std::string &name) {
    if (name == "qwgs") {
        return "mw";
    }
    if (name == "meas_units") {
        return "readout";
    }
    return name;
}

InstrumentType parse_type(const std::string &name, const json &body, int qubit_count) {
    InstrumentType type;
    type.name = name;
    if (!body.contains("count") || !body["count"].is_number_integer() ||
        body["count"].get<int>() <= 0) {
        throw ConfigError("instrument type '" + name + "': positive \"count\" required");
    }
    type.count = body["count"].get<int>();
    if (!body.contains("connection_map") || !body["connection_map"].is_object()) {
        throw ConfigError("instrument type '" + name + "': \"connection_map\" object required");
    }
    const json &cmap = body["connection_map"];
    if (static_cast<int>(cmap.size()) != type.count) {
        throw ConfigError("instrument type '" + name + "': count is " +
                          std::to_string(type.count) + " but connection_map has " +
                          std::to_string(cmap.size()) + " entries");
    }
    type.connection_map.resize(static_cast<size_t>(type.count));
    std::vector<int> owner(static_cast<size_t>(qubit_count), -1);
    for (auto it = cmap.begin(); it != cmap.end(); ++it) {
        int instance = 0;
        try {
            instance = std::stoi(it.key());
        } catch (const std::exception &) {
            throw ConfigError("instrument type '" + name + "': connection_map key '" + it.key() +
                              "' is not an instance id");
        }
        if (instance < 0 || instance >= type.count) {
            throw ConfigError("instrument type '" + name + "': instance id " +
                              std::to_string(instance) + " outside 0.." +
                              std::to_string(type.count - 1));
        }
        auto &qubits = type.connection_map[static_cast<size_t>(instance)];
        if (!qubits.empty()) {
            throw ConfigError("instrument type '" + name + "': duplicate instance id " +
                              std::to_string(instance));
        }
        for (const auto &q : it.value()) {
            if (!q.is_number_integer()) {
                throw ConfigError("instrument type '" + name + "': non-integer qubit index");
            }
            int qubit = q.get<int>();
            if (qubit < 0 || qubit >= qubit_count) {
                throw ConfigError("instrument type '" + name + "': qubit " +
                                  std::to_string(qubit) + " outside 0.." +
                                  std::to_string(qubit_count - 1));
            }
            // Connection maps within one type must be pairwise disjoint.
            if (owner[static_cast<size_t>(qubit)] >= 0) {
                throw ConfigError("instrument type '" + name + "': qubit " +
                                  std::to_string(qubit) + " mapped to both instance " +
                                  std::to_string(owner[static_cast<size_t>(qubit)]) +
                                  " and instance " + std::to_string(instance));
            }
            owner[static_cast<size_t>(qubit)] = instance;
            qubits.push_back(qubit);
        }
        std::sort(qubits.begin(), qubits.end());
        qubits.erase(std::unique(qubits.begin(), qubits.end()), qubits.end());
    }
    type.stacking_rule = body.contains("stacking_rule")
                             ? parse_rule(body["stacking_rule"].get<std::string>(), name)
                             : default_rule(name);
    type.opcode_class =
        body.contains("class") ? body["class"].get<std::string>() : default_class(name);
    type.max_stacking_override.assign(static_cast<size_t>(type.count), 0);
    if (body.contains("max_stacking")) {
        for (auto it = body["max_stacking"].begin(); it != body["max_stacking"].end(); ++it) {
            int instance = std::stoi(it.key());
            if (instance < 0 || instance >= type.count) {
                throw ConfigError("instrument type '" + name + "': max_stacking instance " +
                                  it.key() + " out of range");
            }
            int limit = it.value().get<int>();
            auto size = static_cast<int>(type.connection_map[static_cast<size_t>(instance)].size());
            if (limit < 1 || limit > size) {
                throw ConfigError("instrument type '" + name + "': max_stacking for instance " +
                                  it.key() + " must be in 1.." + std::to_string(size));
            }
            type.max_stacking_override[static_cast<size_t>(instance)] = limit;
        }
    }
    return type;
}

} // namespace

std::string_view to_string(StackingRule rule) {
    switch (rule) {
    case StackingRule::SameGateSameStart: return "same_gate_same_start";
    case StackingRule::SameStartAnyGate: return "same_start_any_gate";
    case StackingRule::Exclusive: return "exclusive";
    }
    return "exclusive";
}

bool InstrumentType::connects(int instance, int qubit) const {
    const auto &qubits = connection_map[static_cast<size_t>(instance)];
    return std::binary_search(qubits.begin(), qubits.end(), qubit);
}

PlatformConfig::PlatformConfig(int qubit_count, int cycle_time_ns,
                               std::vector<InstrumentType> types,
                               std::vector<InstructionDef> instructions)
    : qubit_count_(qubit_count), cycle_time_ns_(cycle_time_ns), types_(std::move(types)) {
    for (auto &def : instructions) {
        instructions_.emplace(def.opcode, std::move(def));
    }
}

const InstructionDef *PlatformConfig::instruction(std::string_view opcode) const {
    auto it = instructions_.find(opcode);
    return it == instructions_.end() ? nullptr : &it->second;
}

Cycle PlatformConfig::duration_cycles(std::string_view opcode) const {
    const InstructionDef *def = instruction(opcode);
    if (def == nullptr) {
        return 1;
    }
    return (static_cast<Cycle>(def->duration_ns) + cycle_time_ns_ - 1) / cycle_time_ns_;
}

std::string_view PlatformConfig::opcode_class_of(std::string_view opcode) const {
    const InstructionDef *def = instruction(opcode);
    return def == nullptr ? std::string_view("none") : std::string_view(def->opcode_class);
}

std::string PlatformConfig::to_json_string() const {
    json resources;
    resources["qubits"] = {{"count", qubit_count_}};
    for (const auto &type : types_) {
        json cmap;
        for (int i = 0; i < type.count; ++i) {
            cmap[std::to_string(i)] = type.connection_map[static_cast<size_t>(i)];
        }
        json body = {{"count", type.count},
                     {"connection_map", std::move(cmap)},
                     {"stacking_rule", std::string(to_string(type.stacking_rule))},
                     {"class", type.opcode_class}};
        json overrides;
        for (int i = 0; i < type.count; ++i) {
            if (type.max_stacking_override[static_cast<size_t>(i)] > 0) {
                overrides[std::to_string(i)] = type.max_stacking_override[static_cast<size_t>(i)];
            }
        }
        if (!overrides.is_null()) {
            body["max_stacking"] = std::move(overrides);
        }
        resources[type.name] = std::move(body);
    }
    json instructions;
    for (const auto &[opcode, def] : instructions_) {
        instructions[opcode] = {{"duration_ns", def.duration_ns}, {"class", def.opcode_class}};
    }
    json doc = {{"cycle_time_ns", cycle_time_ns_},
                {"resources", std::move(resources)},
                {"instructions", std::move(instructions)}};
    return doc.dump(2);
}

std::uint64_t PlatformConfig::hash() const {
    // FNV-1a over the canonical dump.
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : to_json_string()) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

PlatformConfig parse_platform(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception &e) {
        throw ParseError(std::string("platform JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("resources") || !doc["resources"].is_object()) {
        throw ParseError("platform JSON: \"resources\" object required");
    }
    int cycle_time = 20;
    if (doc.contains("cycle_time_ns")) {
        cycle_time = doc["cycle_time_ns"].get<int>();
        if (cycle_time <= 0) {
            throw ConfigError("cycle_time_ns must be positive");
        }
    }
    const json &resources = doc["resources"];
    if (!resources.contains("qubits") || !resources["qubits"].contains("count")) {
        throw ParseError("platform JSON: resources.qubits.count required");
    }
    int qubit_count = resources["qubits"]["count"].get<int>();
    if (qubit_count <= 0) {
        throw ConfigError("qubit count must be positive");
    }

    std::vector<InstrumentType> types;
    for (auto it = resources.begin(); it != resources.end(); ++it) {
        if (it.key() == "qubits") {
            continue;
        }
        types.push_back(parse_type(it.key(), it.value(), qubit_count));
    }
    // Deterministic type order independent of JSON object layout.
    std::sort(types.begin(), types.end(),
              [](const InstrumentType &a, const InstrumentType &b) { return a.name < b.name; });

    std::vector<InstructionDef> instructions;
    if (doc.contains("instructions")) {
        for (auto it = doc["instructions"].begin(); it != doc["instructions"].end(); ++it) {
            InstructionDef def;
            def.opcode = it.key();
            const json &body = it.value();
            if (!body.contains("duration_ns") || !body["duration_ns"].is_number_integer() ||
                body["duration_ns"].get<int>() <= 0) {
                throw ConfigError("instruction '" + def.opcode +
                                  "': positive duration_ns required");
            }
            def.duration_ns = body["duration_ns"].get<int>();
            def.opcode_class = body.contains("class") ? body["class"].get<std::string>() : "none";
            instructions.push_back(std::move(def));
        }
    }
    return PlatformConfig(qubit_count, cycle_time, std::move(types), std::move(instructions));
}

PlatformConfig parse_platform_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open platform file: " + path);
    }
    std::ostringstream content;
    content << in.rdbuf();
    return parse_platform(content.str());
}

std::vector<InstrumentRef> instruments_for(const Gate &gate, const PlatformConfig &platform) {
    std::vector<InstrumentRef> result;
    std::string_view cls = platform.opcode_class_of(gate.opcode);
    if (cls == "none") {
        return result;
    }
    const auto &types = platform.instrument_types();
    for (int t = 0; t < static_cast<int>(types.size()); ++t) {
        const InstrumentType &type = types[static_cast<size_t>(t)];
        if (type.opcode_class != cls) {
            continue;
        }
        for (int i = 0; i < type.count; ++i) {
            for (int q : gate.operands) {
                if (q < static_cast<int>(platform.qubit_count()) && type.connects(i, q)) {
                    result.push_back({t, i});
                    break;
                }
            }
        }
    }
    return result;
}

} // namespace qsched
