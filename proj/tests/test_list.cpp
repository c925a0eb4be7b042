#include <doctest.h>

#include "qsched/generator.hpp"
#include "qsched/list_scheduler.hpp"
#include "qsched/qsdc.hpp"

#include "test_util.hpp"

using namespace qsched;

TEST_CASE("list scheduler handles the running example") {
    PlatformConfig platform = test::s17_platform();
    DepGraph graph = build_depgraph(test::running_example(), platform);

    SUBCASE("stacking enabled reaches 3 cycles") {
        SchedulerOptions options;
        Schedule schedule = schedule_list(graph, platform, options);
        CHECK(schedule.start == std::vector<Cycle>{0, 1, 0, 2});
        CHECK(schedule.latency_cycles == 3);
        CHECK(validate(schedule, graph, platform, options).empty());
        // brute force confirms a 3-cycle schedule exists and is minimal
        auto best = test::brute_force_min_latency(graph, platform, options, 3);
        REQUIRE(best.has_value());
        CHECK(*best == 3);
    }
    SUBCASE("stacking disabled serializes to 4 cycles") {
        SchedulerOptions options;
        options.stacking_enabled = false;
        Schedule schedule = schedule_list(graph, platform, options);
        CHECK(schedule.latency_cycles == 4);
        CHECK(validate(schedule, graph, platform, options).empty());
    }
}

TEST_CASE("empty circuits schedule to zero latency") {
    PlatformConfig platform = test::s17_platform();
    CHECK(schedule_list(Circuit{}, platform).latency_cycles == 0);
}

TEST_CASE("list schedules validate and never beat the dependency bound") {
    PlatformConfig platform = test::s17_platform();
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        GeneratorConfig config;
        config.gates = 4 + static_cast<int>(seed % 20);
        config.qubits = 17;
        config.min_qubit = 1;
        config.seed = seed * 17 + 3;
        DepGraph graph = build_depgraph(generate_circuit(config), platform);
        SchedulerOptions options;
        options.stacking_enabled = (seed % 3) != 0;
        Schedule schedule = schedule_list(graph, platform, options);
        CHECK(validate(schedule, graph, platform, options).empty());
        CHECK(schedule.latency_cycles >= schedule_asap(graph).latency_cycles);
    }
}

TEST_CASE("without instrument conflicts list equals dependency-only ASAP") {
    PlatformConfig platform = test::s17_platform();
    // cnot-only circuits touch no configured instrument
    GeneratorConfig config;
    config.gates = 30;
    config.qubits = 10;
    config.seed = 9;
    config.opcode_mix = {{"cnot", 1.0}};
    DepGraph graph = build_depgraph(generate_circuit(config), platform);
    SchedulerOptions options;
    options.stacking_enabled = false;
    CHECK(schedule_list(graph, platform, options).latency_cycles ==
          schedule_asap(graph).latency_cycles);
}
