#pragma once

// Benchmark harness. Runs algorithm x scenario x repetition cells and writes
// CSV reports.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "superframe/ga.hpp"
#include "superframe/model.hpp"
#include "superframe/pso.hpp"

namespace superframe {

enum class Algorithm { Edf, Dms, Pso, Olpso, Ga, Mga };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::Edf, Algorithm::Dms, Algorithm::Pso,
                                               Algorithm::Olpso, Algorithm::Ga, Algorithm::Mga};

std::string_view algorithm_name(Algorithm a);

/// Case-insensitive; throws std::invalid_argument on an unknown name.
Algorithm parse_algorithm(std::string_view name);

bool is_metaheuristic(Algorithm a);

/// Optimizer settings shared by every run of a harness invocation. The seed
/// fields are overwritten per repetition.
struct AlgorithmSettings {
    GaConfig ga;
    SwarmConfig swarm;
};

/// key=value lines, '#' comments. Keys are the GaConfig / SwarmConfig field
/// names; `ga.` or `swarm.` prefixes disambiguate the shared ones
/// (max_iterations, threads, stop_at_zero_defect). Throws std::invalid_argument.
AlgorithmSettings parse_settings(std::string_view text, AlgorithmSettings base = {});
AlgorithmSettings load_settings(const std::filesystem::path& path, AlgorithmSettings base = {});

struct Summary {
    double mean = 0.0;
    double sigma = 0.0;
    bool sigma_defined = false;  // false for a single value
};

/// Arithmetic mean and sample standard deviation (divisor n-1).
/// Throws std::invalid_argument on empty input.
Summary stats(std::span<const double> values);

/// Outcome of one algorithm run on one scenario.
struct RunOutcome {
    ExecutionTrace trace;
    DefectReport report;
    std::vector<HistoryPoint> history;
};

/// Run one algorithm once. EDF/DMS ignore the seed.
RunOutcome run_algorithm(const Scenario& scenario, Algorithm algorithm, std::uint64_t seed,
                         const AlgorithmSettings& settings);

struct RunStats {
    std::string algorithm;
    std::string scenario_id;
    int reps = 0;
    std::vector<std::uint64_t> seeds;
    std::vector<Millis> defects;
    std::vector<double> wall_ms;          // informational
    std::vector<std::size_t> peak_bytes;  // informational
    Summary summary;
};

/// Repetition i uses seed base_seed + i. EDF and DMS run once and the value
/// is replicated across repetitions. Repetitions run on up to `jobs` threads.
RunStats run_experiment(const Scenario& scenario, std::string scenario_id, Algorithm algorithm, int reps,
                        std::uint64_t base_seed, const AlgorithmSettings& settings, int jobs = 1);

struct MatrixSpec {
    std::vector<Slots> slots{100, 200, 500};
    std::vector<int> nodes{4, 7, 10, 100};
    std::vector<Algorithm> algorithms{std::begin(kAllAlgorithms), std::end(kAllAlgorithms)};
    int reps = 10;
    std::uint64_t base_seed = 1;
    std::uint64_t scenario_seed = 2024;  // random node sets use scenario_seed + nodes
    int jobs = 1;
    bool timing = false;  // also write timing.csv (wall clock, not reproducible)
};

/// 4 nodes -> reference task set (table1_scenario); anything else -> random_scenario(n, slots, scenario_seed + n).
Scenario matrix_scenario(const MatrixSpec& spec, int nodes, Slots slots);
std::string matrix_scenario_id(const MatrixSpec& spec, int nodes, Slots slots);

struct SuiteFiles {
    std::filesystem::path summary;  // slots,nodes,algorithm,reps,mean_defect_ms,sigma_ms,sigma_defined
    std::filesystem::path raw;      // slots,nodes,algorithm,rep,seed,defect_ms
    std::filesystem::path timing;   // slots,nodes,algorithm,rep,wall_ms,peak_bytes; empty unless requested
    std::vector<std::string> errors;  // cells that failed to build
};

/// Runs the matrix and writes three CSVs into out_dir. summary.csv and
/// raw.csv depend only on (spec, settings); timing.csv is opt-in.
SuiteFiles suite(const MatrixSpec& spec, const AlgorithmSettings& settings, const std::filesystem::path& out_dir);

void write_summary_header(std::ostream& out);

/// Recompute summary rows from a raw.csv stream.
void summarize_raw_csv(std::istream& raw, std::ostream& summary);

/// Per-slot trace followed by "idle=<slots> missed=<count> defect=<ms>".
void trace_dump(const Scenario& scenario, Algorithm algorithm, std::uint64_t seed,
                const AlgorithmSettings& settings, const std::filesystem::path& path);
std::string trace_summary_line(const DefectReport& report);

}  // namespace superframe
