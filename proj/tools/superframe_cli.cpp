// superframe: benchmark TDMA superframe schedulers from the command line.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "superframe/bench.hpp"
#include "superframe/evaluator.hpp"
#include "superframe/scenarios.hpp"

namespace fs = std::filesystem;
using namespace superframe;

namespace {

constexpr const char* kOutEnv = "SUPERFRAME_OUT";

fs::path default_out_dir() {
    if (const char* env = std::getenv(kOutEnv); env && *env) return env;
    return "results";
}

struct ScenarioArgs {
    std::string file;
    Slots slots = 100;
    int nodes = 4;
    std::uint64_t scenario_seed = 2024;

    void add_to(CLI::App* app) {
        app->add_option("--scenario", file, "Scenario file (overrides --slots/--nodes)");
        app->add_option("--slots", slots, "Horizon length in slots")->capture_default_str();
        app->add_option("--nodes", nodes, "Node count; 4 selects the reference task set")->capture_default_str();
        app->add_option("--scenario-seed", scenario_seed, "Seed base for random node sets")->capture_default_str();
    }

    std::pair<Scenario, std::string> build() const {
        if (!file.empty()) {
            std::vector<std::string> warnings;
            Scenario sc = load_scenario(file, &warnings);
            for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
            return {sc, fs::path(file).stem().string()};
        }
        MatrixSpec spec;
        spec.scenario_seed = scenario_seed;
        return {matrix_scenario(spec, nodes, slots), matrix_scenario_id(spec, nodes, slots)};
    }
};

AlgorithmSettings settings_from(const std::string& config) {
    return config.empty() ? AlgorithmSettings{} : load_settings(config);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"TDMA superframe scheduling: EDF, DMS, PSO, OLPSO, GA and MGA"};
    app.require_subcommand(1);

    std::string out_dir;
    std::string config;
    std::uint64_t seed = 1;
    int reps = 10;
    int jobs = 1;

    // run
    auto* run = app.add_subcommand("run", "Run one algorithm on one scenario");
    ScenarioArgs run_sc;
    run_sc.add_to(run);
    std::string run_algo = "MGA";
    run->add_option("--algo", run_algo, "EDF, DMS, PSO, OLPSO, GA or MGA")->capture_default_str();
    run->add_option("--reps", reps, "Repetitions")->capture_default_str();
    run->add_option("--seed", seed, "Base seed; rep i uses seed + i")->capture_default_str();
    run->add_option("--config", config, "key=value optimizer settings file");
    run->add_option("--jobs", jobs, "Parallel repetitions")->capture_default_str();

    // suite
    auto* suite_cmd = app.add_subcommand("suite", "Run the slots x nodes x algorithm matrix");
    MatrixSpec matrix;
    std::vector<std::string> suite_algos;
    suite_cmd->add_option("--slots", matrix.slots, "Horizon lengths")->expected(1, -1);
    suite_cmd->add_option("--nodes", matrix.nodes, "Node counts")->expected(1, -1);
    suite_cmd->add_option("--algo", suite_algos, "Algorithms (default: all six)")->expected(1, -1);
    suite_cmd->add_option("--reps", matrix.reps, "Repetitions per cell")->capture_default_str();
    suite_cmd->add_option("--seed", matrix.base_seed, "Base seed")->capture_default_str();
    suite_cmd->add_option("--scenario-seed", matrix.scenario_seed, "Seed base for random node sets")
        ->capture_default_str();
    suite_cmd->add_option("--config", config, "key=value optimizer settings file");
    suite_cmd->add_option("--out", out_dir, std::string("Output directory (default $") + kOutEnv + " or ./results)");
    suite_cmd->add_option("--jobs", matrix.jobs, "Parallel runs")->capture_default_str();
    suite_cmd->add_flag("--timing", matrix.timing, "Also write timing.csv (wall clock and peak heap per rep)");

    // trace
    auto* trace = app.add_subcommand("trace", "Write the per-slot trace of one run");
    ScenarioArgs trace_sc;
    trace_sc.add_to(trace);
    std::string trace_algo = "DMS";
    std::string trace_file;
    trace->add_option("--algo", trace_algo, "Algorithm")->capture_default_str();
    trace->add_option("--seed", seed, "Seed for metaheuristics")->capture_default_str();
    trace->add_option("--config", config, "key=value optimizer settings file");
    trace->add_option("--out", out_dir, "Output directory");
    trace->add_option("--file", trace_file, "Explicit output file (overrides --out)");

    // gen
    auto* gen = app.add_subcommand("gen", "Write a random scenario file");
    int gen_nodes = 7;
    Slots gen_slots = 100;
    std::string gen_file;
    gen->add_option("--nodes", gen_nodes, "Node count")->capture_default_str();
    gen->add_option("--slots", gen_slots, "Horizon length in slots")->capture_default_str();
    gen->add_option("--seed", seed, "Generator seed")->capture_default_str();
    gen->add_option("--out", out_dir, "Output directory");
    gen->add_option("--file", gen_file, "Explicit output file (overrides --out)");
    bool gen_reference = false;
    gen->add_flag("--reference", gen_reference, "Write the fixed reference task set instead of a random one");

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "Recompute mean and sigma from a raw.csv");
    std::string raw_path;
    stats_cmd->add_option("raw", raw_path, "raw.csv written by suite")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            auto [sc, id] = run_sc.build();
            const AlgorithmSettings settings = settings_from(config);
            const RunStats rs = run_experiment(sc, id, parse_algorithm(run_algo), reps, seed, settings, jobs);
            std::cout << "scenario " << rs.scenario_id << "  algorithm " << rs.algorithm << "  reps " << rs.reps
                      << '\n';
            for (int i = 0; i < rs.reps; ++i)
                std::cout << "  rep " << i << "  seed " << rs.seeds[static_cast<std::size_t>(i)] << "  defect "
                          << rs.defects[static_cast<std::size_t>(i)] << " ms  time " << std::fixed
                          << std::setprecision(1) << rs.wall_ms[static_cast<std::size_t>(i)] << " ms\n";
            std::cout << std::setprecision(5) << "mean " << rs.summary.mean << " ms  sigma " << rs.summary.sigma
                      << (rs.summary.sigma_defined ? "" : " (undefined for one rep)") << '\n';
        } else if (*suite_cmd) {
            if (!suite_algos.empty()) {
                matrix.algorithms.clear();
                for (const auto& a : suite_algos) matrix.algorithms.push_back(parse_algorithm(a));
            }
            const fs::path dir = out_dir.empty() ? default_out_dir() : fs::path(out_dir);
            const SuiteFiles files = suite(matrix, settings_from(config), dir);
            for (const auto& e : files.errors) std::cerr << "skipped: " << e << '\n';
            std::cout << "wrote " << files.summary.string() << ", " << files.raw.string();
            if (!files.timing.empty()) std::cout << ", " << files.timing.string();
            std::cout << '\n';
        } else if (*trace) {
            auto [sc, id] = trace_sc.build();
            const Algorithm algo = parse_algorithm(trace_algo);
            fs::path path = trace_file;
            if (path.empty()) {
                const fs::path dir = out_dir.empty() ? default_out_dir() : fs::path(out_dir);
                fs::create_directories(dir);
                path = dir / ("trace_" + id + "_" + std::string(algorithm_name(algo)) + ".txt");
            }
            trace_dump(sc, algo, seed, settings_from(config), path);
            std::ifstream in(path);
            std::string line, last;
            while (std::getline(in, line)) last = line;
            std::cout << path.string() << ": " << last << '\n';
        } else if (*gen) {
            const Scenario sc = gen_reference ? table1_scenario(gen_slots) : random_scenario(gen_nodes, gen_slots, seed);
            fs::path path = gen_file;
            if (path.empty()) {
                const fs::path dir = out_dir.empty() ? default_out_dir() : fs::path(out_dir);
                fs::create_directories(dir);
                path = dir / ((gen_reference ? "table1" : "rand" + std::to_string(gen_nodes)) + "_" +
                              std::to_string(gen_slots) + ".txt");
            }
            save_scenario(sc, path);
            std::cout << "wrote " << path.string() << '\n';
        } else if (*stats_cmd) {
            std::ifstream in(raw_path);
            if (!in) throw std::runtime_error("cannot open " + raw_path);
            summarize_raw_csv(in, std::cout);
        }
    } catch (const UnschedulableError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
