/** \file
 * System-of-difference-constraints scheduling core.
 *
 * Every constraint has the form s_u - s_v <= bound over per-gate start
 * variables. A virtual source fixed at 0 anchors every variable at
 * start >= 0; it is realized implicitly by initializing solutions at 0 and
 * only ever raising them. The system is solved by shortest/longest-path
 * relaxation (SPFA), which keeps solutions integral by construction and
 * detects infeasibility as a negative cycle in the constraint graph.
 */
#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "qsched/common.hpp"

namespace qsched {

/// One start-cycle variable per gate; the variable index is the gate id.
using SchedVar = GateId;

/// s_u - s_v <= bound.
struct DiffConstraint {
    SchedVar u = 0;
    SchedVar v = 0;
    Cycle bound = 0;

    friend bool operator==(const DiffConstraint &, const DiffConstraint &) = default;
};

/// The constraint graph contains a negative cycle. Carries the constraints
/// of one violating cycle for diagnosis.
class InfeasibleSystem : public std::runtime_error {
public:
    InfeasibleSystem(const std::string &msg, std::vector<DiffConstraint> cycle)
        : std::runtime_error(msg), cycle_(std::move(cycle)) {}

    const std::vector<DiffConstraint> &cycle() const { return cycle_; }

private:
    std::vector<DiffConstraint> cycle_;
};

class HorizonTooSmall : public std::runtime_error {
public:
    explicit HorizonTooSmall(const std::string &msg) : std::runtime_error(msg) {}
};

struct Solution {
    std::vector<Cycle> start;
    Cycle makespan = 0;  // max(start + duration), 0 when empty
};

class ConstraintSystem {
public:
    /// One variable per duration entry; durations are needed for makespans
    /// and for the finish-by-horizon bounds of the ALAP solve.
    explicit ConstraintSystem(std::vector<Cycle> durations);

    int var_count() const { return static_cast<int>(durations_.size()); }
    Cycle duration(SchedVar v) const { return durations_[static_cast<size_t>(v)]; }
    const std::vector<DiffConstraint> &constraints() const { return constraints_; }

    /// b starts at least `latency` cycles after a: s_a - s_b <= -latency.
    void add_dependency(SchedVar a, SchedVar b, Cycle latency);

    /// Exact-timing pair: start(b) - start(a) == distance in every feasible
    /// solution. Conflicts surface at solve time.
    void pin_relative(SchedVar a, SchedVar b, Cycle distance);

    void add_constraint(DiffConstraint c);

    /// Component-wise least non-negative solution (ASAP). O(V*E) worst
    /// case; near-linear on the forward-pointing systems the passes build.
    /// Throws InfeasibleSystem with one violating cycle.
    const Solution &solve_asap();

    /// Component-wise greatest solution with every variable finishing by
    /// `horizon`. Throws HorizonTooSmall when horizon < ASAP makespan.
    /// Does not disturb the cached ASAP solution.
    Solution solve_alap(Cycle horizon);

    /// True iff the system plus `c` is feasible. On success the constraint
    /// is kept and the cached ASAP solution repaired incrementally; on
    /// failure the system is left unchanged. Requires a prior solve_asap().
    bool check_feasible_incremental(DiffConstraint c);

    /// Adds both pin inequalities atomically; rolls both back on failure.
    bool try_pin(SchedVar a, SchedVar b, Cycle distance);

    /// Valid after solve_asap(); incremental additions keep it current.
    const Solution &cached_solution() const { return *cache_; }
    bool has_solution() const { return cache_.has_value(); }

    /// One constraint per line, e.g. "s3 - s1 <= -1".
    void dump(std::ostream &os) const;

private:
    struct Edge {
        SchedVar to;
        Cycle gap;      // start(to) >= start(from) + gap
        int constraint; // index into constraints_
    };

    bool add_incremental(std::span<const DiffConstraint> batch);
    std::vector<DiffConstraint> extract_cycle(SchedVar overrun) const;

    std::vector<Cycle> durations_;
    std::vector<DiffConstraint> constraints_;
    std::vector<std::vector<Edge>> out_;  // upward propagation (ASAP)
    std::vector<std::vector<Edge>> in_;   // downward propagation (ALAP)
    std::optional<Solution> cache_;
    std::vector<int> pred_edge_;    // constraint that last raised a variable
    std::vector<int> relax_count_;  // scratch for incremental propagation
};

} // namespace qsched
