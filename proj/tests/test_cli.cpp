#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "test_util.hpp"

namespace {

struct CmdResult {
    int exit_code;
    std::string output;
};

CmdResult run_cli(const std::string &args) {
    std::string cmd = std::string(QSCHED_CLI_PATH) + " " + args + " 2>&1";
    FILE *pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buffer[4096];
    size_t n = 0;
    while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) {
        out.append(buffer, n);
    }
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::string platform_arg() {
    return "--platform " + qsched::test::data_path("s17.json");
}

std::string example_arg() {
    return "--circuit " + qsched::test::data_path("running_example.qc");
}

} // namespace

TEST_CASE("cli schedules the running example") {
    auto r = run_cli("schedule " + platform_arg() + " " + example_arg() + " --algo qsdc");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("latency: 3 cycles (60 ns)") != std::string::npos);

    r = run_cli("schedule " + platform_arg() + " " + example_arg() + " --algo qsdc --qsdc off");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("latency: 4 cycles (80 ns)") != std::string::npos);

    r = run_cli("schedule " + platform_arg() + " " + example_arg() +
                " --algo list --no-stacking");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("latency: 4 cycles (80 ns)") != std::string::npos);
}

TEST_CASE("cli reports input errors with exit 1") {
    auto r = run_cli("schedule " + platform_arg() + " --circuit /does/not/exist");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("input error") != std::string::npos);
}

TEST_CASE("oracle over its gate limit exits 2") {
    std::string dir = std::filesystem::temp_directory_path().string() + "/qsched_cli";
    std::filesystem::create_directories(dir);
    auto gen = run_cli("generate --gates 50 --qubits 17 --qubit-base 1 --seed 5 --out " + dir +
                       "/big.qc");
    REQUIRE(gen.exit_code == 0);
    auto r = run_cli("schedule " + platform_arg() + " --circuit " + dir +
                     "/big.qc --algo oracle");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("limit exceeded") != std::string::npos);
}

TEST_CASE("conflicting pins exit 2 with the offending cycle") {
    auto r = run_cli("schedule " + platform_arg() + " " + example_arg() +
                     " --algo qsdc --pin 0 3 0");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("infeasible") != std::string::npos);
}

TEST_CASE("generate is byte-identical under a fixed seed") {
    std::string dir = std::filesystem::temp_directory_path().string() + "/qsched_cli";
    std::filesystem::create_directories(dir);
    REQUIRE(run_cli("generate --gates 10 --qubits 5 --seed 1 --out " + dir + "/a.qc")
                .exit_code == 0);
    REQUIRE(run_cli("generate --gates 10 --qubits 5 --seed 1 --out " + dir + "/b.qc")
                .exit_code == 0);
    CHECK(qsched::test::read_file(dir + "/a.qc") == qsched::test::read_file(dir + "/b.qc"));
    CHECK_FALSE(qsched::test::read_file(dir + "/a.qc").empty());
}

TEST_CASE("compare over generated circuits is deterministic") {
    std::string args = "compare " + platform_arg() +
                       " --gen 12 --seed 7 --qubits 17 --gates-min 10 --gates-max 40"
                       " --algos qsdc,list,list:nostack --oracle-small";
    auto first = run_cli(args);
    auto second = run_cli(args);
    CHECK(first.exit_code == 0);
    CHECK(first.output == second.output);
    CHECK(first.output.find("geomean speedup qsdc over list") != std::string::npos);
}

TEST_CASE("schedule round-trips through validate") {
    std::string dir = std::filesystem::temp_directory_path().string() + "/qsched_cli";
    std::filesystem::create_directories(dir);
    std::string sched = dir + "/sched.json";
    auto r = run_cli("schedule " + platform_arg() + " " + example_arg() + " --algo qsdc --out " +
                     sched);
    REQUIRE(r.exit_code == 0);
    auto ok = run_cli("validate " + platform_arg() + " --schedule " + sched);
    CHECK(ok.exit_code == 0);
    CHECK(ok.output.find("ok: schedule is legal") != std::string::npos);

    // corrupt one start: push the z gate onto the y gate's cycle
    std::string text = qsched::test::read_file(sched);
    size_t pos = text.find("\"3\": 2");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 6, "\"3\": 1");
    std::ofstream(sched, std::ios::binary) << text;
    auto bad = run_cli("validate " + platform_arg() + " --schedule " + sched);
    CHECK(bad.exit_code == 3);
    CHECK(bad.output.find("violation") != std::string::npos);
}

TEST_CASE("dump flags expose the linear order and constraints") {
    auto r = run_cli("schedule " + platform_arg() + " " + example_arg() +
                     " --algo qsdc --dump-order --dump-constraints");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("linear order: 0 1 2 3") != std::string::npos);
    CHECK(r.output.find("s0 - s3 <= -1") != std::string::npos);
}

TEST_CASE("gantt output shows the stacked wave") {
    auto r = run_cli("schedule " + platform_arg() + " " + example_arg() + " --algo qsdc --gantt");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("x:q2,q4") != std::string::npos);
}
