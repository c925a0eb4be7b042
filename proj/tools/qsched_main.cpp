/** \file
 * qsched command line: schedule, compare, validate and generate.
 *
 * Exit codes: 0 success, 1 input error, 2 infeasible system or oracle
 * limit, 3 validation failure.
 */
#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "qsched/generator.hpp"
#include "qsched/list_scheduler.hpp"
#include "qsched/log.hpp"
#include "qsched/oracle.hpp"
#include "qsched/qsdc.hpp"
#include "qsched/schedule.hpp"

namespace {

using namespace qsched;

struct CommonArgs {
    std::string platform_path;
    bool stacking_on = true;
    std::string qsdc_mode = "on";
    std::vector<std::string> max_stacking;
    std::vector<std::string> pins;
    Cycle horizon_slack = 0;
};

std::string read_text(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open " + path);
    }
    std::ostringstream content;
    content << in.rdbuf();
    return content.str();
}

void write_file(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ParseError("cannot write " + path);
    }
    out << content;
}

SchedulerOptions make_options(const CommonArgs &args) {
    if (args.qsdc_mode != "on" && args.qsdc_mode != "off") {
        throw ParseError("--qsdc expects on|off, got '" + args.qsdc_mode + "'");
    }
    SchedulerOptions options;
    options.stacking_enabled = args.stacking_on && args.qsdc_mode != "off";
    options.horizon_slack = args.horizon_slack;
    for (const std::string &entry : args.max_stacking) {
        size_t first = entry.find(':');
        size_t second = entry.find(':', first + 1);
        if (first == std::string::npos || second == std::string::npos) {
            throw ParseError("--max-stacking expects <type>:<instance>:<n>, got '" + entry +
                             "'");
        }
        try {
            options.max_stacking[{entry.substr(0, first),
                                  std::stoi(entry.substr(first + 1, second - first - 1))}] =
                std::stoi(entry.substr(second + 1));
        } catch (const std::exception &) {
            throw ParseError("malformed --max-stacking entry '" + entry + "'");
        }
    }
    if (args.pins.size() % 3 != 0) {
        throw ParseError("--pin expects triplets: <gate a> <gate b> <distance>");
    }
    for (size_t i = 0; i + 3 <= args.pins.size(); i += 3) {
        try {
            options.pins.emplace_back(std::stoi(args.pins[i]), std::stoi(args.pins[i + 1]),
                                      std::stol(args.pins[i + 2]));
        } catch (const std::exception &) {
            throw ParseError("malformed --pin arguments");
        }
    }
    return options;
}

struct ScheduleOutcome {
    Schedule schedule;
    double wall_ms = 0.0;
};

ScheduleOutcome run_algo(const std::string &algo, const DepGraph &graph,
                         const PlatformConfig &platform, const SchedulerOptions &options,
                         const OracleLimits &limits) {
    auto begin = std::chrono::steady_clock::now();
    Schedule schedule;
    if (algo == "qsdc") {
        schedule = schedule_qsdc(graph, platform, options);
    } else if (algo == "list") {
        schedule = schedule_list(graph, platform, options);
    } else if (algo == "asap") {
        schedule = schedule_asap(graph, options);
    } else if (algo == "oracle") {
        schedule = schedule_optimal(graph, platform, options, limits).schedule;
    } else {
        throw ParseError("unknown algorithm '" + algo + "'");
    }
    double wall =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - begin)
            .count();
    return {std::move(schedule), wall};
}

// "list:nostack" selects an algorithm with stacking degraded
std::pair<std::string, SchedulerOptions> algo_variant(const std::string &token,
                                                      const SchedulerOptions &base) {
    size_t colon = token.find(':');
    std::string name = token.substr(0, colon);
    SchedulerOptions options = base;
    if (colon != std::string::npos) {
        if (token.substr(colon + 1) != "nostack") {
            throw ParseError("unknown algorithm variant '" + token + "'");
        }
        options.stacking_enabled = false;
    }
    return {name, options};
}

int cmd_schedule(const CommonArgs &common, const std::string &circuit_path,
                 const std::string &algo, const std::string &out_path, bool gantt,
                 bool dump_constraints, bool dump_order, const OracleLimits &limits) {
    PlatformConfig platform = parse_platform_file(common.platform_path);
    Circuit circuit = parse_circuit_file(circuit_path);
    DepGraph graph = build_depgraph(circuit, platform);
    SchedulerOptions options = make_options(common);

    if (dump_constraints || dump_order) {
        ConstraintSystem sys(graph.durations());
        for (const DepEdge &e : graph.edges()) {
            sys.add_dependency(e.src, e.dst, e.weight);
        }
        for (const auto &[a, b, l] : options.pins) {
            sys.pin_relative(a, b, l);
        }
        Solution asap = sys.solve_asap();
        Solution alap = sys.solve_alap(asap.makespan + options.horizon_slack);
        auto order = linear_order(graph, asap, alap);
        if (dump_order) {
            std::cout << "linear order:";
            for (GateId g : order) {
                std::cout << ' ' << g;
            }
            std::cout << '\n';
        }
        if (dump_constraints) {
            QsdcStats stats;
            add_resource_constraints(graph, sys, platform, options, order, stats);
            sys.dump(std::cout);
        }
    }

    ScheduleOutcome outcome = run_algo(algo, graph, platform, options, limits);
    std::cout << "latency: " << outcome.schedule.latency_cycles << " cycles ("
              << outcome.schedule.latency_ns(platform) << " ns)\n";
    if (gantt) {
        std::cout << render_gantt(outcome.schedule, graph, platform);
    }
    if (!out_path.empty()) {
        write_file(out_path, schedule_to_json(outcome.schedule, graph.circuit(), platform));
    }
    return 0;
}

int cmd_validate(const CommonArgs &common, const std::string &schedule_path) {
    PlatformConfig platform = parse_platform_file(common.platform_path);
    LoadedSchedule loaded = schedule_from_json(read_text(schedule_path));
    if (loaded.platform_hash != platform.hash()) {
        std::cerr
            << "platform hash mismatch: schedule was produced against a different config\n";
        return 1;
    }
    DepGraph graph = build_depgraph(loaded.circuit, platform);
    auto violations = validate(loaded.schedule, graph, platform, make_options(common));
    if (violations.empty()) {
        std::cout << "ok: schedule is legal (" << loaded.schedule.latency_cycles << " cycles)\n";
        return 0;
    }
    for (const Violation &v : violations) {
        std::cout << "violation: " << v.message << '\n';
    }
    return 3;
}

int cmd_generate(const std::string &platform_path, int gates, int qubits, int qubit_base,
                 std::uint64_t seed, const std::string &mix, const std::string &out_path,
                 const std::string &out_dir, int count) {
    GeneratorConfig config;
    config.gates = gates;
    config.qubits = qubits;
    config.min_qubit = qubit_base;
    config.seed = seed;
    if (!mix.empty()) {
        config.opcode_mix = parse_opcode_mix(mix);
    }
    if (!platform_path.empty()) {
        PlatformConfig platform = parse_platform_file(platform_path);
        if (qubit_base + qubits > platform.qubit_count()) {
            throw ConfigError("generator window [" + std::to_string(qubit_base) + ", " +
                              std::to_string(qubit_base + qubits) +
                              ") exceeds the platform's " +
                              std::to_string(platform.qubit_count()) + " qubits");
        }
    }
    if (count <= 1 && out_dir.empty()) {
        write_file(out_path, to_text(generate_circuit(config)));
        return 0;
    }
    std::filesystem::create_directories(out_dir);
    for (int i = 0; i < count; ++i) {
        GeneratorConfig one = config;
        one.seed = seed + static_cast<std::uint64_t>(i);
        std::ostringstream name;
        name << out_dir << "/gen_" << std::setw(4) << std::setfill('0') << i << ".qc";
        write_file(name.str(), to_text(generate_circuit(one)));
    }
    return 0;
}

int cmd_compare(const CommonArgs &common, const std::string &circuits_dir,
                const std::string &algos_csv, bool oracle_small, int gen_count,
                std::uint64_t gen_seed, int gen_qubits, int gen_qubit_base, int gates_min,
                int gates_max, const std::string &json_out, const OracleLimits &limits) {
    PlatformConfig platform = parse_platform_file(common.platform_path);
    SchedulerOptions base = make_options(common);

    std::vector<std::pair<std::string, Circuit>> circuits;
    if (!circuits_dir.empty()) {
        std::vector<std::filesystem::path> paths;
        for (const auto &entry : std::filesystem::directory_iterator(circuits_dir)) {
            if (!entry.is_regular_file()) {
                continue;
            }
            auto ext = entry.path().extension().string();
            if (ext == ".qc" || ext == ".txt" || ext == ".json") {
                paths.push_back(entry.path());
            }
        }
        std::sort(paths.begin(), paths.end());
        for (const auto &path : paths) {
            circuits.emplace_back(path.filename().string(), parse_circuit_file(path.string()));
        }
    }
    for (int i = 0; i < gen_count; ++i) {
        GeneratorConfig config;
        config.seed = gen_seed + static_cast<std::uint64_t>(i);
        std::mt19937_64 size_rng(config.seed * 0x9e3779b97f4a7c15ull + 1);
        config.gates =
            gates_min + static_cast<int>(size_rng() % static_cast<std::uint64_t>(std::max(
                                                          1, gates_max - gates_min + 1)));
        config.qubits = gen_qubits;
        config.min_qubit = gen_qubit_base;
        std::ostringstream name;
        name << "gen_" << std::setw(4) << std::setfill('0') << i;
        circuits.emplace_back(name.str(), generate_circuit(config));
    }

    std::vector<std::string> algo_tokens;
    {
        std::istringstream in(algos_csv);
        std::string token;
        while (std::getline(in, token, ',')) {
            if (!token.empty()) {
                algo_tokens.push_back(token);
            }
        }
    }
    if (algo_tokens.empty()) {
        throw ParseError("--algos must select at least one algorithm");
    }

    // circuits are independent; schedule them in parallel, merge by index
    std::vector<CircuitResult> results(circuits.size());
    std::atomic<size_t> next{0};
    std::atomic<bool> invalid{false};
    std::string first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < circuits.size(); i = next.fetch_add(1)) {
            const auto &[name, circuit] = circuits[i];
            DepGraph graph = build_depgraph(circuit, platform);
            CircuitResult row;
            row.name = name;
            row.platform_hash = platform.hash();
            for (const std::string &token : algo_tokens) {
                auto [algo, options] = algo_variant(token, base);
                if (algo == "oracle" &&
                    static_cast<int>(graph.gate_count()) > limits.max_gates) {
                    continue;
                }
                try {
                    ScheduleOutcome outcome = run_algo(algo, graph, platform, options, limits);
                    auto violations = algo == "asap"
                                          ? validate_dependencies(outcome.schedule, graph)
                                          : validate(outcome.schedule, graph, platform, options);
                    if (!violations.empty()) {
                        std::scoped_lock lock(error_mutex);
                        invalid = true;
                        if (first_error.empty()) {
                            first_error = name + " / " + token + ": " + violations[0].message;
                        }
                        continue;
                    }
                    row.runs.push_back({token, outcome.schedule.latency_cycles,
                                        outcome.schedule.latency_ns(platform), outcome.wall_ms});
                } catch (const LimitExceeded &) {
                    // oracle over budget on this circuit; no row
                }
            }
            if (oracle_small && static_cast<int>(graph.gate_count()) <= limits.max_gates &&
                std::find(algo_tokens.begin(), algo_tokens.end(), "oracle") ==
                    algo_tokens.end()) {
                try {
                    ScheduleOutcome outcome = run_algo("oracle", graph, platform, base, limits);
                    row.runs.push_back({"oracle", outcome.schedule.latency_cycles,
                                        outcome.schedule.latency_ns(platform), outcome.wall_ms});
                } catch (const LimitExceeded &) {
                }
            }
            results[i] = std::move(row);
        }
    };
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto &thread : pool) {
        thread.join();
    }
    if (invalid) {
        std::cerr << "validation failure (a scheduler produced an illegal schedule): "
                  << first_error << '\n';
        return 3;
    }

    CompareReport report = compute_metrics(results, platform);
    std::cout << render_table(report);
    if (!json_out.empty()) {
        write_file(json_out, report_to_json(report));
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"qsched: SDC-based resource constrained scheduler for quantum control "
                 "architectures"};
    app.require_subcommand(1);

    CommonArgs common;
    OracleLimits limits;

    auto *schedule = app.add_subcommand("schedule", "schedule one circuit");
    std::string circuit_path;
    std::string algo = "qsdc";
    std::string out_path;
    bool gantt = false;
    bool dump_constraints = false;
    bool dump_order = false;
    schedule->add_option("--platform", common.platform_path, "platform JSON")->required();
    schedule->add_option("--circuit", circuit_path, "circuit file")->required();
    schedule->add_option("--algo", algo, "qsdc | list | asap | oracle");
    schedule->add_option("--out", out_path, "write schedule JSON here");
    schedule->add_flag("--gantt", gantt, "print a textual timeline");
    schedule->add_option("--qsdc", common.qsdc_mode, "on | off (stacking)");
    schedule->add_flag("!--no-stacking", common.stacking_on, "disable stacking");
    schedule->add_option("--max-stacking", common.max_stacking,
                         "<type>:<instance>:<n>, repeatable");
    schedule->add_option("--horizon-slack", common.horizon_slack,
                         "extra cycles on the ALAP horizon");
    schedule->add_option("--pin", common.pins, "a b l: pin start(b)-start(a)=l")->expected(-3);
    schedule->add_flag("--dump-constraints", dump_constraints,
                       "print the QSDC constraint system");
    schedule->add_flag("--dump-order", dump_order, "print the linear order");
    schedule->add_option("--oracle-max-gates", limits.max_gates, "oracle gate limit");
    schedule->add_option("--oracle-timeout-s", limits.timeout_s, "oracle time budget");
    schedule->add_option("--oracle-max-makespan", limits.max_makespan, "oracle makespan bound");

    auto *compare = app.add_subcommand("compare", "compare algorithms over circuits");
    std::string circuits_dir;
    std::string algos_csv = "qsdc,list";
    bool oracle_small = false;
    int gen_count = 0;
    std::uint64_t gen_seed = 0;
    int gen_qubits = 17;
    int gen_qubit_base = 1;
    int gates_min = 20;
    int gates_max = 200;
    std::string json_out;
    compare->add_option("--platform", common.platform_path, "platform JSON")->required();
    compare->add_option("--circuits", circuits_dir, "directory of circuit files");
    compare->add_option("--algos", algos_csv,
                        "comma list: qsdc, list, asap, oracle; append :nostack to "
                        "degrade stacking");
    compare->add_flag("--oracle-small", oracle_small,
                      "add oracle rows where the circuit fits its limits");
    compare->add_option("--gen", gen_count, "generate N seeded circuits");
    compare->add_option("--seed", gen_seed, "generator seed");
    compare->add_option("--qubits", gen_qubits, "generator qubit count");
    compare->add_option("--qubit-base", gen_qubit_base, "lowest generated qubit index");
    compare->add_option("--gates-min", gates_min, "minimum generated gate count");
    compare->add_option("--gates-max", gates_max, "maximum generated gate count");
    compare->add_option("--json", json_out, "write the report as JSON");
    compare->add_flag("!--no-stacking", common.stacking_on, "disable stacking");
    compare->add_option("--max-stacking", common.max_stacking,
                        "<type>:<instance>:<n>, repeatable");
    compare->add_option("--horizon-slack", common.horizon_slack, "ALAP horizon slack");
    compare->add_option("--oracle-max-gates", limits.max_gates, "oracle gate limit");
    compare->add_option("--oracle-timeout-s", limits.timeout_s, "oracle time budget");

    auto *validate_cmd = app.add_subcommand("validate", "validate a schedule JSON");
    std::string schedule_path;
    validate_cmd->add_option("--platform", common.platform_path, "platform JSON")->required();
    validate_cmd->add_option("--schedule", schedule_path, "schedule JSON")->required();
    validate_cmd->add_flag("!--no-stacking", common.stacking_on, "disable stacking");
    validate_cmd->add_option("--max-stacking", common.max_stacking,
                             "<type>:<instance>:<n>, repeatable");

    auto *generate = app.add_subcommand("generate", "write seeded random circuits");
    std::string gen_platform;
    int gates = 10;
    int qubits = 5;
    int qubit_base = 0;
    std::uint64_t seed = 0;
    std::string mix;
    std::string gen_out = "circuit.qc";
    std::string out_dir;
    int count = 1;
    generate->add_option("--gates", gates, "gate count");
    generate->add_option("--qubits", qubits, "qubit count");
    generate->add_option("--qubit-base", qubit_base, "lowest qubit index");
    generate->add_option("--seed", seed, "RNG seed");
    generate->add_option("--mix", mix, "opcode mix, e.g. x:0.5,measure:0.5");
    generate->add_option("--out", gen_out, "output file");
    generate->add_option("--out-dir", out_dir, "output directory for --count > 1");
    generate->add_option("--count", count, "number of circuits");
    generate->add_option("--platform", gen_platform, "check qubits against this platform");

    CLI11_PARSE(app, argc, argv);

    try {
        if (schedule->parsed()) {
            return cmd_schedule(common, circuit_path, algo, out_path, gantt, dump_constraints,
                                dump_order, limits);
        }
        if (compare->parsed()) {
            return cmd_compare(common, circuits_dir, algos_csv, oracle_small, gen_count,
                               gen_seed, gen_qubits, gen_qubit_base, gates_min, gates_max,
                               json_out, limits);
        }
        if (validate_cmd->parsed()) {
            return cmd_validate(common, schedule_path);
        }
        if (generate->parsed()) {
            return cmd_generate(gen_platform, gates, qubits, qubit_base, seed, mix, gen_out,
                                out_dir, count);
        }
    } catch (const InfeasibleSystem &e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        for (const DiffConstraint &c : e.cycle()) {
            std::cerr << "  s" << c.u << " - s" << c.v << " <= " << c.bound << '\n';
        }
        return 2;
    } catch (const HorizonTooSmall &e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return 2;
    } catch (const LimitExceeded &e) {
        std::cerr << "limit exceeded: " << e.what() << '\n';
        return 2;
    } catch (const ParseError &e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 1;
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
