/** \file
 * Platform configuration model: instrument types with qubit connection
 * maps and stacking rules, the instruction set, and resource queries.
 */
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qsched/circuit.hpp"
#include "qsched/common.hpp"

namespace qsched {

/// How an instrument instance may be shared within one cycle window.
enum class StackingRule {
    SameGateSameStart,  // qwgs: same opcode and same start cycle
    SameStartAnyGate,   // meas_units: same start cycle, any opcode
    Exclusive,          // one gate at a time
};

std::string_view to_string(StackingRule rule);

struct InstrumentType {
    std::string name;
    int count = 0;
    std::vector<std::vector<int>> connection_map;  // instance -> sorted qubits
    StackingRule stacking_rule = StackingRule::Exclusive;
    std::string opcode_class;
    std::vector<int> max_stacking_override;  // per instance; 0 = no override

    bool connects(int instance, int qubit) const;
};

struct InstructionDef {
    std::string opcode;
    int duration_ns = 0;
    std::string opcode_class;  // instrument class it occupies, or "none"
};

/// An instrument instance, identified by type index and instance id.
struct InstrumentRef {
    int type_index = 0;
    int instance = 0;

    friend auto operator<=>(const InstrumentRef &, const InstrumentRef &) = default;
};

class PlatformConfig {
public:
    PlatformConfig() = default;
    PlatformConfig(int qubit_count, int cycle_time_ns,
                   std::vector<InstrumentType> types,
                   std::vector<InstructionDef> instructions);

    int qubit_count() const { return qubit_count_; }
    int cycle_time_ns() const { return cycle_time_ns_; }
    const std::vector<InstrumentType> &instrument_types() const { return types_; }
    const InstrumentType &type(int index) const { return types_[static_cast<size_t>(index)]; }

    /// nullptr when the opcode is not in the instruction set.
    const InstructionDef *instruction(std::string_view opcode) const;

    /// ceil(duration_ns / cycle_time_ns); 1 for unknown opcodes.
    Cycle duration_cycles(std::string_view opcode) const;

    /// "none" for unknown opcodes.
    std::string_view opcode_class_of(std::string_view opcode) const;

    /// FNV-1a over the canonical JSON dump; guards schedules against being
    /// validated with the wrong config.
    std::uint64_t hash() const;

    std::string to_json_string() const;

private:
    int qubit_count_ = 0;
    int cycle_time_ns_ = 20;
    std::vector<InstrumentType> types_;
    std::map<std::string, InstructionDef, std::less<>> instructions_;
};

/// Parses and validates a platform JSON document.
/// Types named "qwgs" default to stacking rule same_gate_same_start and
/// class "mw"; "meas_units" to same_start_any_gate and class "readout".
/// Other types take explicit "stacking_rule" / "class" keys (defaults:
/// exclusive, class = type name). Throws ParseError / ConfigError.
PlatformConfig parse_platform(std::string_view json_text);
PlatformConfig parse_platform_file(const std::string &path);

/// Instrument instances a gate occupies: every instance whose type matches
/// the gate's opcode class and whose connection set intersects the gate's
/// operands. Empty when the class is "none" or not configured. Sorted.
std::vector<InstrumentRef> instruments_for(const Gate &gate, const PlatformConfig &platform);

} // namespace qsched
