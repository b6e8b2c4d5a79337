#include "superframe/bench.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "alloc_tracker.hpp"
#include "superframe/baselines.hpp"
#include "superframe/evaluator.hpp"
#include "superframe/parallel.hpp"
#include "superframe/scenarios.hpp"

namespace superframe {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.5f", v);
    return buf;
}

}  // namespace

std::string_view algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::Edf: return "EDF";
        case Algorithm::Dms: return "DMS";
        case Algorithm::Pso: return "PSO";
        case Algorithm::Olpso: return "OLPSO";
        case Algorithm::Ga: return "GA";
        case Algorithm::Mga: return "MGA";
    }
    return "?";
}

Algorithm parse_algorithm(std::string_view name) {
    const std::string key = lower(trim(name));
    for (Algorithm a : kAllAlgorithms)
        if (lower(algorithm_name(a)) == key) return a;
    throw std::invalid_argument("unknown algorithm '" + std::string(name) +
                                "' (expected EDF, DMS, PSO, OLPSO, GA or MGA)");
}

bool is_metaheuristic(Algorithm a) { return a != Algorithm::Edf && a != Algorithm::Dms; }

// ---------------------------------------------------------------------------
// settings file

namespace {

template <class T>
T parse_number(std::string_view key, std::string_view v) {
    if constexpr (std::is_same_v<T, double>) {
        std::string s(v);
        char* end = nullptr;
        const double d = std::strtod(s.c_str(), &end);
        if (s.empty() || end != s.c_str() + s.size())
            throw std::invalid_argument("setting " + std::string(key) + ": bad number '" + s + "'");
        return d;
    } else {
        T out{};
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || p != v.data() + v.size())
            throw std::invalid_argument("setting " + std::string(key) + ": bad integer '" + std::string(v) + "'");
        return out;
    }
}

bool parse_bool(std::string_view key, std::string_view v) {
    const std::string s = lower(v);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw std::invalid_argument("setting " + std::string(key) + ": expected true/false");
}

bool apply_ga(GaConfig& ga, std::string_view key, std::string_view v) {
    if (key == "population_size") ga.population_size = parse_number<int>(key, v);
    else if (key == "max_generations") ga.max_generations = parse_number<int>(key, v);
    else if (key == "stall_generations") ga.stall_generations = parse_number<int>(key, v);
    else if (key == "tournament_size") ga.tournament_size = parse_number<int>(key, v);
    else if (key == "offspring_fraction") ga.offspring_fraction = parse_number<double>(key, v);
    else if (key == "crossover_points") ga.crossover_points = parse_number<int>(key, v);
    else if (key == "crossover_rate") ga.crossover_rate = parse_number<double>(key, v);
    else if (key == "mutation_rate") ga.mutation_rate = parse_number<double>(key, v);
    else if (key == "gaussian_sigma") ga.gaussian_sigma = parse_number<double>(key, v);
    else if (key == "stop_at_zero_defect") ga.stop_at_zero_defect = parse_bool(key, v);
    else if (key == "threads") ga.threads = parse_number<int>(key, v);
    else if (key == "selection") {
        const std::string s = lower(v);
        if (s == "tournament") ga.selection = GaConfig::Selection::Tournament;
        else if (s == "truncate") ga.selection = GaConfig::Selection::Truncate;
        else throw std::invalid_argument("selection must be tournament or truncate");
    } else if (key == "crossover") {
        const std::string s = lower(v);
        if (s == "single_point") ga.crossover = GaConfig::Crossover::SinglePoint;
        else if (s == "multi_point") ga.crossover = GaConfig::Crossover::MultiPoint;
        else if (s == "uniform") ga.crossover = GaConfig::Crossover::Uniform;
        else throw std::invalid_argument("crossover must be single_point, multi_point or uniform");
    } else if (key == "mutator") {
        const std::string s = lower(v);
        if (s == "random_reset") ga.mutator = GaConfig::Mutator::RandomReset;
        else if (s == "gaussian") ga.mutator = GaConfig::Mutator::Gaussian;
        else throw std::invalid_argument("mutator must be random_reset or gaussian");
    } else {
        return false;
    }
    return true;
}

bool apply_swarm(SwarmConfig& sw, std::string_view key, std::string_view v) {
    if (key == "particles") sw.particles = parse_number<int>(key, v);
    else if (key == "max_iterations") sw.max_iterations = parse_number<int>(key, v);
    else if (key == "c1") sw.c1 = parse_number<double>(key, v);
    else if (key == "c2") sw.c2 = parse_number<double>(key, v);
    else if (key == "c") sw.c = parse_number<double>(key, v);
    else if (key == "olpso_reconstruction_gap" || key == "reconstruction_gap")
        sw.reconstruction_gap = parse_number<int>(key, v);
    else if (key == "stop_at_zero_defect") sw.stop_at_zero_defect = parse_bool(key, v);
    else if (key == "threads") sw.threads = parse_number<int>(key, v);
    else return false;
    return true;
}

}  // namespace

AlgorithmSettings parse_settings(std::string_view text, AlgorithmSettings s) {
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("settings line " + std::to_string(line_no) + ": expected key=value");
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        bool used = false;
        if (key.rfind("ga.", 0) == 0) {
            used = apply_ga(s.ga, std::string_view(key).substr(3), value);
        } else if (key.rfind("swarm.", 0) == 0) {
            used = apply_swarm(s.swarm, std::string_view(key).substr(6), value);
        } else {
            const bool g = apply_ga(s.ga, key, value);
            const bool w = apply_swarm(s.swarm, key, value);
            used = g || w;
        }
        if (!used) throw std::invalid_argument("settings line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    s.ga.validate();
    s.swarm.validate();
    return s;
}

AlgorithmSettings load_settings(const std::filesystem::path& path, AlgorithmSettings base) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open settings file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_settings(buf.str(), base);
}

// ---------------------------------------------------------------------------
// statistics

Summary stats(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("stats of an empty sample");
    Summary s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() < 2) return s;
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sigma = std::sqrt(ss / static_cast<double>(values.size() - 1));
    s.sigma_defined = true;
    return s;
}

// ---------------------------------------------------------------------------
// runs

RunOutcome run_algorithm(const Scenario& scenario, Algorithm algorithm, std::uint64_t seed,
                         const AlgorithmSettings& settings) {
    RunOutcome out;
    switch (algorithm) {
        case Algorithm::Edf:
            out.trace = edf_schedule(scenario);
            break;
        case Algorithm::Dms:
            out.trace = dms_schedule(scenario);
            break;
        case Algorithm::Ga:
        case Algorithm::Mga: {
            GaConfig cfg = settings.ga;
            cfg.seed = seed;
            OptimizerResult r = algorithm == Algorithm::Ga ? evolve(scenario, cfg) : mga_evolve(scenario, cfg);
            out.trace = decode_and_simulate(scenario, r.best);
            out.history = std::move(r.history);
            break;
        }
        case Algorithm::Pso:
        case Algorithm::Olpso: {
            SwarmConfig cfg = settings.swarm;
            cfg.seed = seed;
            cfg.variant = algorithm == Algorithm::Pso ? SwarmConfig::Variant::Pso : SwarmConfig::Variant::Olpso;
            OptimizerResult r = run_swarm(scenario, cfg);
            out.trace = decode_and_simulate(scenario, r.best);
            out.history = std::move(r.history);
            break;
        }
    }
    out.report = defect_time(out.trace, scenario);
    return out;
}

namespace {

struct RepResult {
    Millis defect = 0;
    double wall_ms = 0.0;
    std::size_t peak_bytes = 0;
};

// Timed on the calling thread.
RepResult timed_run(const Scenario& scenario, Algorithm algorithm, std::uint64_t seed,
                    const AlgorithmSettings& settings) {
    alloc_tracker::reset();
    const auto t0 = std::chrono::steady_clock::now();
    const RunOutcome r = run_algorithm(scenario, algorithm, seed, settings);
    const auto t1 = std::chrono::steady_clock::now();
    return {r.report.defect_time, std::chrono::duration<double, std::milli>(t1 - t0).count(),
            alloc_tracker::peak_bytes()};
}

void fill_summary(RunStats& rs) {
    std::vector<double> v(rs.defects.begin(), rs.defects.end());
    rs.summary = stats(v);
}

}  // namespace

RunStats run_experiment(const Scenario& scenario, std::string scenario_id, Algorithm algorithm, int reps,
                        std::uint64_t base_seed, const AlgorithmSettings& settings, int jobs) {
    if (reps < 1) throw std::invalid_argument("reps must be >= 1");
    RunStats rs;
    rs.algorithm = std::string(algorithm_name(algorithm));
    rs.scenario_id = std::move(scenario_id);
    rs.reps = reps;
    for (int i = 0; i < reps; ++i) rs.seeds.push_back(base_seed + static_cast<std::uint64_t>(i));

    std::vector<RepResult> results(static_cast<std::size_t>(reps));
    if (is_metaheuristic(algorithm)) {
        parallel_for(results.size(), jobs, [&](std::size_t i) {
            results[i] = timed_run(scenario, algorithm, rs.seeds[i], settings);
        });
    } else {
        const RepResult once = timed_run(scenario, algorithm, base_seed, settings);
        std::fill(results.begin(), results.end(), once);
    }
    for (const auto& r : results) {
        rs.defects.push_back(r.defect);
        rs.wall_ms.push_back(r.wall_ms);
        rs.peak_bytes.push_back(r.peak_bytes);
    }
    fill_summary(rs);
    return rs;
}

// ---------------------------------------------------------------------------
// suite

Scenario matrix_scenario(const MatrixSpec& spec, int nodes, Slots slots) {
    if (nodes == 4) return table1_scenario(slots);
    return random_scenario(nodes, slots, spec.scenario_seed + static_cast<std::uint64_t>(nodes));
}

std::string matrix_scenario_id(const MatrixSpec& spec, int nodes, Slots slots) {
    if (nodes == 4) return "table1_" + std::to_string(slots);
    return "rand" + std::to_string(nodes) + "_" + std::to_string(slots) + "_s" +
           std::to_string(spec.scenario_seed + static_cast<std::uint64_t>(nodes));
}

void write_summary_header(std::ostream& out) {
    out << "slots,nodes,algorithm,reps,mean_defect_ms,sigma_ms,sigma_defined\n";
}

namespace {

struct Cell {
    Slots slots;
    int nodes;
    Algorithm algorithm;
    std::optional<Scenario> scenario;
};

void write_summary_row(std::ostream& out, Slots slots, int nodes, std::string_view algo, int reps,
                       const Summary& s) {
    out << slots << ',' << nodes << ',' << algo << ',' << reps << ',' << fmt_double(s.mean) << ','
        << fmt_double(s.sigma) << ',' << (s.sigma_defined ? 1 : 0) << '\n';
}

}  // namespace

SuiteFiles suite(const MatrixSpec& spec, const AlgorithmSettings& settings, const std::filesystem::path& out_dir) {
    if (spec.reps < 1) throw std::invalid_argument("reps must be >= 1");
    std::filesystem::create_directories(out_dir);
    SuiteFiles files{out_dir / "summary.csv", out_dir / "raw.csv", {}, {}};
    if (spec.timing) files.timing = out_dir / "timing.csv";

    std::vector<Cell> cells;
    for (Slots sl : spec.slots) {
        for (int n : spec.nodes) {
            std::optional<Scenario> sc;
            try {
                sc = matrix_scenario(spec, n, sl);
                if (!schedulability_check(*sc))
                    throw UnschedulableError("scenario is not schedulable");
            } catch (const std::exception& e) {
                files.errors.push_back(matrix_scenario_id(spec, n, sl) + ": " + e.what());
                sc.reset();
            }
            for (Algorithm a : spec.algorithms) cells.push_back({sl, n, a, sc});
        }
    }

    // One task per (cell, rep); priority schedulers only need rep 0.
    struct Task {
        std::size_t cell;
        int rep;
    };
    std::vector<Task> tasks;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        if (!cells[c].scenario) continue;
        const int n = is_metaheuristic(cells[c].algorithm) ? spec.reps : 1;
        for (int r = 0; r < n; ++r) tasks.push_back({c, r});
    }
    std::vector<RepResult> results(tasks.size());
    std::vector<std::string> task_errors(tasks.size());
    parallel_for(tasks.size(), spec.jobs, [&](std::size_t i) {
        const Cell& cell = cells[tasks[i].cell];
        try {
            results[i] = timed_run(*cell.scenario, cell.algorithm,
                                   spec.base_seed + static_cast<std::uint64_t>(tasks[i].rep), settings);
        } catch (const std::exception& e) {
            task_errors[i] = e.what();
        }
    });

    std::vector<std::vector<RepResult>> per_cell(cells.size());
    std::vector<bool> cell_failed(cells.size(), false);
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        per_cell[tasks[i].cell].push_back(results[i]);
        if (!task_errors[i].empty() && !cell_failed[tasks[i].cell]) {
            cell_failed[tasks[i].cell] = true;
            const Cell& c = cells[tasks[i].cell];
            files.errors.push_back(matrix_scenario_id(spec, c.nodes, c.slots) + " " +
                                   std::string(algorithm_name(c.algorithm)) + ": " + task_errors[i]);
        }
    }

    std::ofstream summary(files.summary, std::ios::binary);
    std::ofstream raw(files.raw, std::ios::binary);
    std::ofstream timing;
    if (spec.timing) timing.open(files.timing, std::ios::binary);
    if (!summary || !raw || (spec.timing && !timing)) throw std::runtime_error("cannot write CSVs into " + out_dir.string());
    write_summary_header(summary);
    raw << "slots,nodes,algorithm,rep,seed,defect_ms\n";
    if (spec.timing) timing << "slots,nodes,algorithm,rep,wall_ms,peak_bytes\n";

    for (std::size_t c = 0; c < cells.size(); ++c) {
        const Cell& cell = cells[c];
        if (!cell.scenario || cell_failed[c]) continue;
        const std::string_view name = algorithm_name(cell.algorithm);
        std::vector<double> defects;
        for (int r = 0; r < spec.reps; ++r) {
            const RepResult& rr = per_cell[c][is_metaheuristic(cell.algorithm) ? static_cast<std::size_t>(r) : 0];
            const std::uint64_t seed = spec.base_seed + static_cast<std::uint64_t>(r);
            defects.push_back(static_cast<double>(rr.defect));
            raw << cell.slots << ',' << cell.nodes << ',' << name << ',' << r << ',' << seed << ','
                << rr.defect << '\n';
            if (spec.timing)
                timing << cell.slots << ',' << cell.nodes << ',' << name << ',' << r << ','
                   << fmt_double(rr.wall_ms) << ',' << rr.peak_bytes << '\n';
        }
        write_summary_row(summary, cell.slots, cell.nodes, name, spec.reps, stats(defects));
    }
    return files;
}

void summarize_raw_csv(std::istream& raw, std::ostream& summary) {
    struct Group {
        Slots slots;
        int nodes;
        std::string algo;
        std::vector<double> values;
    };
    std::vector<Group> groups;
    std::map<std::string, std::size_t> index;
    std::string line;
    bool header = true;
    int line_no = 0;
    while (std::getline(raw, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line.rfind("slots,", 0) == 0) continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 6) throw std::invalid_argument("raw.csv line " + std::to_string(line_no) + ": expected 6 fields");
        const std::string key = f[0] + "," + f[1] + "," + f[2];
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, groups.size()).first;
            groups.push_back({parse_number<Slots>("slots", f[0]), parse_number<int>("nodes", f[1]), f[2], {}});
        }
        groups[it->second].values.push_back(static_cast<double>(parse_number<Millis>("defect_ms", f[5])));
    }
    write_summary_header(summary);
    for (const auto& g : groups)
        write_summary_row(summary, g.slots, g.nodes, g.algo, static_cast<int>(g.values.size()), stats(g.values));
}

std::string trace_summary_line(const DefectReport& report) {
    return "idle=" + std::to_string(report.idle_slots) + " missed=" + std::to_string(report.missed_deadline_count) +
           " defect=" + std::to_string(report.defect_time);
}

void trace_dump(const Scenario& scenario, Algorithm algorithm, std::uint64_t seed,
                const AlgorithmSettings& settings, const std::filesystem::path& path) {
    const RunOutcome r = run_algorithm(scenario, algorithm, seed, settings);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write trace file " + path.string());
    write_trace(out, r.trace);
    out << trace_summary_line(r.report) << '\n';
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace superframe
