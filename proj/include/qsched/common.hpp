/** \file
 * Shared scalar types and error classes for the qsched library.
 */
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qsched {

/// Start cycles, durations and constraint bounds. Signed: difference
/// constraints are naturally negative, and intermediate sums must not wrap.
using Cycle = std::int64_t;

/// Dense gate index; equals the gate's position in its circuit.
using GateId = std::int32_t;

/// Malformed circuit or platform input. Carries a message that already
/// names the offending line or key.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Semantically invalid platform configuration (overlapping connection
/// maps, count mismatches, out-of-range qubits, non-positive durations).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Oracle input exceeds the configured search limits (gate count, makespan
/// bound or time budget).
class LimitExceeded : public std::runtime_error {
public:
    explicit LimitExceeded(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace qsched
