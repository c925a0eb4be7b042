/** \file
 * Difference-constraint solver.
 *
 * The least non-negative solution (ASAP) is the least fixpoint of the
 * relaxation operators start(v) >= start(u) - bound, computed by a queue
 * based longest-path relaxation (SPFA) from the all-zero assignment. The
 * greatest solution under a finish-by-horizon bound (ALAP) mirrors it:
 * shortest-path relaxation downward from the per-variable upper bounds.
 * Incremental additions warm-start from the cached fixpoint and keep an
 * undo log so that an infeasible constraint leaves the system untouched.
 */
#include "qsched/sdc.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <ostream>
#include <sstream>

namespace qsched {

ConstraintSystem::ConstraintSystem(std::vector<Cycle> durations)
    : durations_(std::move(durations)) {
    out_.resize(durations_.size());
    in_.resize(durations_.size());
}

void ConstraintSystem::add_dependency(SchedVar a, SchedVar b, Cycle latency) {
    assert(a != b);
    add_constraint({a, b, -latency});
}

void ConstraintSystem::pin_relative(SchedVar a, SchedVar b, Cycle distance) {
    assert(a != b);
    add_constraint({a, b, -distance});
    add_constraint({b, a, distance});
}

void ConstraintSystem::add_constraint(DiffConstraint c) {
    assert(c.u != c.v);
    assert(c.u >= 0 && c.u < var_count() && c.v >= 0 && c.v < var_count());
    int index = static_cast<int>(constraints_.size());
    constraints_.push_back(c);
    // s_u - s_v <= bound  <=>  start(v) >= start(u) - bound
    out_[static_cast<size_t>(c.u)].push_back({c.v, -c.bound, index});
    in_[static_cast<size_t>(c.v)].push_back({c.u, -c.bound, index});
    cache_.reset();
}

namespace {

Cycle makespan_of(const std::vector<Cycle> &start, const std::vector<Cycle> &dur) {
    Cycle m = 0;
    for (size_t i = 0; i < start.size(); ++i) {
        m = std::max(m, start[i] + dur[i]);
    }
    return m;
}

} // namespace

std::vector<DiffConstraint> ConstraintSystem::extract_cycle(SchedVar overrun) const {
    // Walk the last-relaxation predecessors until a variable repeats. The
    // walk is bounded; if it ever escapes the pumped region we return what
    // we have rather than loop.
    std::vector<int> mark(durations_.size(), -1);
    std::vector<DiffConstraint> path;
    SchedVar at = overrun;
    int step = 0;
    while (step <= var_count() + 1) {
        if (mark[static_cast<size_t>(at)] >= 0) {
            // constraints from the first visit of `at` onward form the cycle
            return {path.begin() + mark[static_cast<size_t>(at)], path.end()};
        }
        mark[static_cast<size_t>(at)] = static_cast<int>(path.size());
        int cidx = pred_edge_[static_cast<size_t>(at)];
        if (cidx < 0) {
            break;
        }
        path.push_back(constraints_[static_cast<size_t>(cidx)]);
        at = constraints_[static_cast<size_t>(cidx)].u;
        ++step;
    }
    return path;
}

const Solution &ConstraintSystem::solve_asap() {
    if (cache_.has_value()) {
        return *cache_;
    }
    const int n = var_count();
    std::vector<Cycle> d(static_cast<size_t>(n), 0);  // implicit source anchors
    std::vector<int> relax_count(static_cast<size_t>(n), 0);
    std::vector<char> queued(static_cast<size_t>(n), 1);
    pred_edge_.assign(static_cast<size_t>(n), -1);
    std::deque<SchedVar> queue;
    for (SchedVar v = 0; v < n; ++v) {
        queue.push_back(v);
    }
    while (!queue.empty()) {
        SchedVar u = queue.front();
        queue.pop_front();
        queued[static_cast<size_t>(u)] = 0;
        for (const Edge &e : out_[static_cast<size_t>(u)]) {
            Cycle candidate = d[static_cast<size_t>(u)] + e.gap;
            if (candidate > d[static_cast<size_t>(e.to)]) {
                d[static_cast<size_t>(e.to)] = candidate;
                pred_edge_[static_cast<size_t>(e.to)] = e.constraint;
                if (++relax_count[static_cast<size_t>(e.to)] > n) {
                    throw InfeasibleSystem("difference constraint system has a negative cycle",
                                           extract_cycle(e.to));
                }
                if (!queued[static_cast<size_t>(e.to)]) {
                    queued[static_cast<size_t>(e.to)] = 1;
                    queue.push_back(e.to);
                }
            }
        }
    }
    cache_ = Solution{std::move(d), 0};
    cache_->makespan = makespan_of(cache_->start, durations_);
    return *cache_;
}

Solution ConstraintSystem::solve_alap(Cycle horizon) {
    const Solution &asap = solve_asap();
    if (horizon < asap.makespan) {
        std::ostringstream msg;
        msg << "horizon " << horizon << " below ASAP makespan " << asap.makespan;
        throw HorizonTooSmall(msg.str());
    }
    const int n = var_count();
    std::vector<Cycle> d(static_cast<size_t>(n));
    for (SchedVar v = 0; v < n; ++v) {
        d[static_cast<size_t>(v)] = horizon - durations_[static_cast<size_t>(v)];
    }
    std::vector<char> queued(static_cast<size_t>(n), 1);
    std::deque<SchedVar> queue;
    for (SchedVar v = 0; v < n; ++v) {
        queue.push_back(v);
    }
    // downward relaxation: s_u <= s_v + bound
    while (!queue.empty()) {
        SchedVar v = queue.front();
        queue.pop_front();
        queued[static_cast<size_t>(v)] = 0;
        for (const Edge &e : in_[static_cast<size_t>(v)]) {
            // e.gap is -bound of the constraint (e.to = u here)
            Cycle candidate = d[static_cast<size_t>(v)] - e.gap;
            if (candidate < d[static_cast<size_t>(e.to)]) {
                d[static_cast<size_t>(e.to)] = candidate;
                if (!queued[static_cast<size_t>(e.to)]) {
                    queued[static_cast<size_t>(e.to)] = 1;
                    queue.push_back(e.to);
                }
            }
        }
    }
    Solution result{std::move(d), 0};
    result.makespan = makespan_of(result.start, durations_);
    return result;
}

bool ConstraintSystem::add_incremental(std::span<const DiffConstraint> batch) {
    solve_asap();  // establish the cache when absent
    std::vector<Cycle> &d = cache_->start;
    const int n = var_count();

    size_t first_new = constraints_.size();
    for (const DiffConstraint &c : batch) {
        assert(c.u != c.v);
        int index = static_cast<int>(constraints_.size());
        constraints_.push_back(c);
        out_[static_cast<size_t>(c.u)].push_back({c.v, -c.bound, index});
        in_[static_cast<size_t>(c.v)].push_back({c.u, -c.bound, index});
    }

    // warm-start relaxation from the violated constraints only
    std::vector<std::pair<SchedVar, Cycle>> undo;
    std::vector<SchedVar> touched;
    if (relax_count_.size() != static_cast<size_t>(n)) {
        relax_count_.assign(static_cast<size_t>(n), 0);
    }
    std::deque<SchedVar> queue;
    std::vector<char> queued(static_cast<size_t>(n), 0);
    bool feasible = true;

    auto raise = [&](SchedVar v, Cycle value) {
        undo.emplace_back(v, d[static_cast<size_t>(v)]);
        if (relax_count_[static_cast<size_t>(v)] == 0) {
            touched.push_back(v);
        }
        d[static_cast<size_t>(v)] = value;
        if (++relax_count_[static_cast<size_t>(v)] > n) {
            feasible = false;
        }
        if (!queued[static_cast<size_t>(v)]) {
            queued[static_cast<size_t>(v)] = 1;
            queue.push_back(v);
        }
    };

    for (const DiffConstraint &c : batch) {
        Cycle required = d[static_cast<size_t>(c.u)] - c.bound;
        if (required > d[static_cast<size_t>(c.v)]) {
            raise(c.v, required);
        }
        if (!feasible) {
            break;
        }
    }
    while (feasible && !queue.empty()) {
        SchedVar u = queue.front();
        queue.pop_front();
        queued[static_cast<size_t>(u)] = 0;
        for (const Edge &e : out_[static_cast<size_t>(u)]) {
            Cycle candidate = d[static_cast<size_t>(u)] + e.gap;
            if (candidate > d[static_cast<size_t>(e.to)]) {
                raise(e.to, candidate);
                if (!feasible) {
                    break;
                }
            }
        }
    }

    for (SchedVar v : touched) {
        relax_count_[static_cast<size_t>(v)] = 0;
    }
    if (!feasible) {
        // restore starts in reverse insertion order and drop the batch
        for (auto it = undo.rbegin(); it != undo.rend(); ++it) {
            d[static_cast<size_t>(it->first)] = it->second;
        }
        for (size_t i = constraints_.size(); i > first_new; --i) {
            const DiffConstraint &c = constraints_[i - 1];
            out_[static_cast<size_t>(c.u)].pop_back();
            in_[static_cast<size_t>(c.v)].pop_back();
        }
        constraints_.resize(first_new);
        return false;
    }
    for (const auto &entry : undo) {
        size_t v = static_cast<size_t>(entry.first);
        cache_->makespan = std::max(cache_->makespan, d[v] + durations_[v]);
    }
    return true;
}

bool ConstraintSystem::check_feasible_incremental(DiffConstraint c) {
    return add_incremental({&c, 1});
}

bool ConstraintSystem::try_pin(SchedVar a, SchedVar b, Cycle distance) {
    DiffConstraint both[2] = {{a, b, -distance}, {b, a, distance}};
    return add_incremental(both);
}

void ConstraintSystem::dump(std::ostream &os) const {
    for (const DiffConstraint &c : constraints_) {
        os << 's' << c.u << " - s" << c.v << " <= " << c.bound << '\n';
    }
}

} // namespace qsched
