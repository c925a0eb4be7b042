#include <doctest.h>

#include <random>
#include <sstream>

#include "qsched/generator.hpp"
#include "qsched/sdc.hpp"

#include "test_util.hpp"

using namespace qsched;

namespace {

ConstraintSystem running_example_system() {
    // unit durations, single dependency X2 -> Z2
    ConstraintSystem sys(std::vector<Cycle>{1, 1, 1, 1});
    sys.add_dependency(0, 3, 1);
    return sys;
}

// replay every constraint plus the implicit start >= 0 anchors
bool satisfies_all(const ConstraintSystem &sys, const std::vector<Cycle> &start) {
    for (const DiffConstraint &c : sys.constraints()) {
        if (start[static_cast<size_t>(c.u)] - start[static_cast<size_t>(c.v)] > c.bound) {
            return false;
        }
    }
    for (Cycle s : start) {
        if (s < 0) {
            return false;
        }
    }
    return true;
}

// feasible random system built around a hidden ground-truth assignment
ConstraintSystem random_feasible_system(std::mt19937_64 &rng, std::vector<Cycle> *truth_out) {
    int n = 2 + static_cast<int>(rng() % 10);
    std::vector<Cycle> durations;
    std::vector<Cycle> truth;
    for (int i = 0; i < n; ++i) {
        durations.push_back(1 + static_cast<Cycle>(rng() % 3));
        truth.push_back(static_cast<Cycle>(rng() % 12));
    }
    ConstraintSystem sys(durations);
    int constraints = 1 + static_cast<int>(rng() % (3 * n));
    for (int k = 0; k < constraints; ++k) {
        auto u = static_cast<SchedVar>(rng() % n);
        auto v = static_cast<SchedVar>(rng() % n);
        if (u == v) {
            continue;
        }
        Cycle slack = static_cast<Cycle>(rng() % 4);
        sys.add_constraint({u, v, truth[static_cast<size_t>(u)] -
                                      truth[static_cast<size_t>(v)] + slack});
    }
    if (truth_out != nullptr) {
        *truth_out = truth;
    }
    return sys;
}

} // namespace

TEST_CASE("add_dependency forces the successor at least l cycles later") {
    ConstraintSystem sys(std::vector<Cycle>{1, 1});
    sys.add_dependency(0, 1, 1);
    CHECK(sys.solve_asap().start == std::vector<Cycle>{0, 1});

    ConstraintSystem wide(std::vector<Cycle>{3, 1});
    wide.add_dependency(0, 1, 3);
    CHECK(wide.solve_asap().start == std::vector<Cycle>{0, 3});
}

TEST_CASE("opposite unit dependencies form a negative cycle") {
    ConstraintSystem sys(std::vector<Cycle>{1, 1});
    sys.add_constraint({0, 1, -1});
    sys.add_constraint({1, 0, -1});
    try {
        sys.solve_asap();
        FAIL("expected InfeasibleSystem");
    } catch (const InfeasibleSystem &e) {
        CHECK(e.cycle().size() == 2);
        Cycle total = 0;
        for (const DiffConstraint &c : e.cycle()) {
            total += c.bound;
        }
        CHECK(total == -2);
    }
}

TEST_CASE("pin_relative fixes the exact distance") {
    ConstraintSystem sys(std::vector<Cycle>{1, 1});
    sys.pin_relative(0, 1, 2);
    CHECK(sys.solve_asap().start == std::vector<Cycle>{0, 2});

    ConstraintSystem zero(std::vector<Cycle>{1, 1});
    zero.pin_relative(0, 1, 0);
    CHECK(zero.solve_asap().start == std::vector<Cycle>{0, 0});
}

TEST_CASE("a pin conflicting with a dependency is infeasible") {
    ConstraintSystem sys(std::vector<Cycle>{1, 1});
    sys.add_dependency(0, 1, 2);
    sys.pin_relative(0, 1, 1);
    CHECK_THROWS_AS(sys.solve_asap(), InfeasibleSystem);
}

TEST_CASE("dependency-only ASAP matches the running example") {
    ConstraintSystem sys = running_example_system();
    CHECK(sys.solve_asap().start == std::vector<Cycle>{0, 0, 0, 1});
    CHECK(sys.solve_asap().makespan == 2);
}

TEST_CASE("trivial ASAP cases") {
    ConstraintSystem one(std::vector<Cycle>{1});
    CHECK(one.solve_asap().start == std::vector<Cycle>{0});

    ConstraintSystem chain(std::vector<Cycle>{1, 1, 1});
    chain.add_dependency(0, 1, 1);
    chain.add_dependency(1, 2, 1);
    CHECK(chain.solve_asap().start == std::vector<Cycle>{0, 1, 2});
}

TEST_CASE("ALAP at horizon 2 matches the brute-force component maximum") {
    ConstraintSystem sys = running_example_system();
    Solution alap = sys.solve_alap(2);
    CHECK(alap.start == std::vector<Cycle>{0, 1, 1, 1});

    PlatformConfig platform = test::s17_platform();
    DepGraph graph = build_depgraph(test::running_example(), platform);
    CHECK(alap.start == test::brute_force_alap(graph, 2));
}

TEST_CASE("ALAP trivia") {
    ConstraintSystem single(std::vector<Cycle>{1});
    CHECK(single.solve_alap(5).start == std::vector<Cycle>{4});

    ConstraintSystem chain(std::vector<Cycle>{1, 1, 1});
    chain.add_dependency(0, 1, 1);
    chain.add_dependency(1, 2, 1);
    CHECK(chain.solve_alap(chain.solve_asap().makespan).start == chain.solve_asap().start);

    CHECK_THROWS_AS(chain.solve_alap(2), HorizonTooSmall);
}

TEST_CASE("incremental additions keep the cached solution exact") {
    ConstraintSystem sys(std::vector<Cycle>{1, 1, 1});
    sys.add_dependency(0, 1, 1);
    sys.solve_asap();

    SUBCASE("redundant constraints change nothing") {
        std::vector<Cycle> before = sys.cached_solution().start;
        CHECK(sys.check_feasible_incremental({0, 1, 5}));
        CHECK(sys.cached_solution().start == before);
    }
    SUBCASE("an infeasible pin rolls back") {
        size_t constraints_before = sys.constraints().size();
        std::vector<Cycle> before = sys.cached_solution().start;
        CHECK_FALSE(sys.try_pin(1, 0, 0));  // would need gate 1 == gate 0, but 1 >= 0+1
        CHECK(sys.constraints().size() == constraints_before);
        CHECK(sys.cached_solution().start == before);
        // and the system still accepts feasible additions afterwards
        CHECK(sys.check_feasible_incremental({1, 2, 0}));
    }
}

TEST_CASE("100 random feasible insertions equal a from-scratch solve") {
    std::mt19937_64 rng(7);
    std::vector<Cycle> durations(8, 1);
    ConstraintSystem incremental(durations);
    ConstraintSystem batch(durations);
    std::vector<Cycle> truth(8);
    for (size_t i = 0; i < truth.size(); ++i) {
        truth[i] = static_cast<Cycle>(rng() % 10);
    }
    incremental.solve_asap();
    int accepted = 0;
    for (int k = 0; k < 100; ++k) {
        auto u = static_cast<SchedVar>(rng() % 8);
        auto v = static_cast<SchedVar>(rng() % 8);
        if (u == v) {
            continue;
        }
        DiffConstraint c{u, v, truth[static_cast<size_t>(u)] - truth[static_cast<size_t>(v)] +
                                   static_cast<Cycle>(rng() % 3)};
        REQUIRE(incremental.check_feasible_incremental(c));
        batch.add_constraint(c);
        ++accepted;
    }
    REQUIRE(accepted > 50);
    CHECK(incremental.cached_solution().start == batch.solve_asap().start);
}

TEST_CASE("ASAP solutions are exact component-wise minima") {
    std::mt19937_64 rng(42);
    for (int round = 0; round < 500; ++round) {
        ConstraintSystem sys = random_feasible_system(rng, nullptr);
        Solution asap;
        REQUIRE_NOTHROW(asap = sys.solve_asap());
        CHECK(satisfies_all(sys, asap.start));
        // decrementing any single start violates some constraint or anchor
        for (size_t g = 0; g < asap.start.size(); ++g) {
            auto lowered = asap.start;
            lowered[g] -= 1;
            CHECK_FALSE(satisfies_all(sys, lowered));
        }
    }
}

TEST_CASE("ALAP dominates ASAP component-wise") {
    std::mt19937_64 rng(43);
    for (int round = 0; round < 200; ++round) {
        ConstraintSystem sys = random_feasible_system(rng, nullptr);
        Solution asap = sys.solve_asap();
        Solution alap = sys.solve_alap(asap.makespan + static_cast<Cycle>(rng() % 4));
        CHECK(satisfies_all(sys, alap.start));
        for (size_t g = 0; g < asap.start.size(); ++g) {
            CHECK(asap.start[g] <= alap.start[g]);
        }
    }
}

TEST_CASE("dependency-only ASAP equals longest-path distances") {
    PlatformConfig platform = test::s17_platform();
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        GeneratorConfig config;
        config.gates = 25;
        config.qubits = 6;
        config.seed = seed;
        DepGraph graph = build_depgraph(generate_circuit(config), platform);
        ConstraintSystem sys(graph.durations());
        for (const DepEdge &e : graph.edges()) {
            sys.add_dependency(e.src, e.dst, e.weight);
        }
        CHECK(sys.solve_asap().start == test::longest_path_starts(graph));
    }
}

TEST_CASE("constraint dump uses the s<i> text format") {
    ConstraintSystem sys = running_example_system();
    std::ostringstream out;
    sys.dump(out);
    CHECK(out.str() == "s0 - s3 <= -1\n");
}
