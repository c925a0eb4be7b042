#include <doctest.h>

#include <algorithm>

#include "qsched/circuit.hpp"
#include "qsched/depgraph.hpp"
#include "qsched/generator.hpp"

#include "test_util.hpp"

using namespace qsched;

TEST_CASE("parse_circuit reads the running example") {
    Circuit c = parse_circuit("x q2\ny q3\nx q4\nz q2\n");
    REQUIRE(c.size() == 4);
    CHECK(c.qubit_count() == 5);
    CHECK(c.gate(0).opcode == "x");
    CHECK(c.gate(0).operands == std::vector<int>{2});
    CHECK(c.gate(1).opcode == "y");
    CHECK(c.gate(1).operands == std::vector<int>{3});
    CHECK(c.gate(2).operands == std::vector<int>{4});
    CHECK(c.gate(3).opcode == "z");
    for (GateId g = 0; g < 4; ++g) {
        CHECK(c.gate(g).id == g);
    }
}

TEST_CASE("empty input with a qubits header keeps the declared register") {
    Circuit c = parse_circuit("qubits 3\n");
    CHECK(c.qubit_count() == 3);
    CHECK(c.empty());
}

TEST_CASE("duplicate operands are rejected") {
    CHECK_THROWS_AS(parse_circuit("cnot q0 q0\n"), ParseError);
}

TEST_CASE("parse errors carry the line number") {
    try {
        parse_circuit("x q2\nbogus\n");
        FAIL("expected ParseError");
    } catch (const ParseError &e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("operands past the declared register are rejected") {
    CHECK_THROWS_AS(parse_circuit("qubits 3\nx q3\n"), ParseError);
}

TEST_CASE("comments, blank lines and comma separators are accepted") {
    Circuit c = parse_circuit("# header comment\n\ncnot q0,q1  # trailing\n");
    REQUIRE(c.size() == 1);
    CHECK(c.gate(0).operands == std::vector<int>{0, 1});
}

TEST_CASE("JSON circuits parse and validate") {
    Circuit c = parse_circuit(R"({"qubits": 3, "gates": [{"op": "x", "qubits": [1]},
                                                         {"op": "cnot", "qubits": [0, 2]}]})");
    REQUIRE(c.size() == 2);
    CHECK(c.qubit_count() == 3);
    CHECK(c.gate(1).operands == std::vector<int>{0, 2});
    CHECK_THROWS_AS(parse_circuit("{\"gates\": ["), ParseError);
    CHECK_THROWS_AS(parse_circuit(R"({"qubits": 1, "gates": [{"op": "x", "qubits": [5]}]})"),
                    ParseError);
}

TEST_CASE("text and JSON serialization round-trip") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        GeneratorConfig config;
        config.gates = static_cast<int>(seed % 15);
        config.qubits = 6;
        config.seed = seed;
        Circuit original = generate_circuit(config);
        CHECK(parse_circuit(to_text(original)) == original);
        CHECK(parse_circuit(to_json_string(original)) == original);
    }
}

TEST_CASE("build_depgraph on the running example yields the single x->z edge") {
    PlatformConfig platform = test::s17_platform();
    DepGraph graph = build_depgraph(test::running_example(), platform);
    REQUIRE(graph.edges().size() == 1);
    CHECK(graph.edges()[0].src == 0);
    CHECK(graph.edges()[0].dst == 3);
    CHECK(graph.edges()[0].weight == 1);
    CHECK(graph.circuit().gate(0).duration_cycles == 1);
}

TEST_CASE("single gate has no edges") {
    DepGraph graph = build_depgraph(parse_circuit("x q0\n"), test::s17_platform());
    CHECK(graph.edges().empty());
}

TEST_CASE("a same-qubit chain is totally ordered") {
    DepGraph graph = build_depgraph(parse_circuit("x q0\ny q0\nz q0\n"), test::s17_platform());
    REQUIRE(graph.edges().size() == 2);
    auto starts = test::longest_path_starts(graph);
    CHECK(starts == std::vector<Cycle>{0, 1, 2});
}

TEST_CASE("two-qubit gates depend on both operand qubits") {
    DepGraph graph =
        build_depgraph(parse_circuit("x q0\ny q1\ncnot q0 q1\n"), test::s17_platform());
    REQUIRE(graph.edges().size() == 2);
    CHECK(graph.predecessors(2).size() == 2);
}

TEST_CASE("edge weights come from the predecessor duration") {
    // cnot is 40 ns = 2 cycles on the bundled config
    DepGraph graph = build_depgraph(parse_circuit("cnot q0 q1\nx q0\n"), test::s17_platform());
    REQUIRE(graph.edges().size() == 1);
    CHECK(graph.edges()[0].weight == 2);
    CHECK(graph.circuit().gate(0).duration_cycles == 2);
}

TEST_CASE("same-qubit gates keep program order in the graph") {
    GeneratorConfig config;
    config.gates = 40;
    config.qubits = 5;
    config.seed = 11;
    Circuit circuit = generate_circuit(config);
    DepGraph graph = build_depgraph(circuit, test::s17_platform());
    for (int q = 0; q < circuit.qubit_count(); ++q) {
        GateId prev = -1;
        for (const Gate &g : circuit.gates()) {
            if (std::find(g.operands.begin(), g.operands.end(), q) == g.operands.end()) {
                continue;
            }
            if (prev >= 0) {
                // last-writer edge present with the lowered predecessor duration
                bool found = false;
                for (auto [p, w] : graph.predecessors(g.id)) {
                    if (p == prev) {
                        found = true;
                        CHECK(w == graph.circuit().gate(prev).duration_cycles);
                    }
                }
                CHECK(found);
            }
            prev = g.id;
        }
    }
}
