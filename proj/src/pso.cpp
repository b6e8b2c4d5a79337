#include "superframe/pso.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "superframe/evaluator.hpp"
#include "superframe/parallel.hpp"

namespace superframe {

void SwarmConfig::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("SwarmConfig: " + what); };
    if (particles < 2) fail("particles must be at least 2");
    if (max_iterations < 1) fail("max_iterations must be >= 1");
    if (!(c1 > 0.0) || !(c2 > 0.0) || !(c > 0.0)) fail("acceleration constants must be positive");
    if (reconstruction_gap < 1) fail("reconstruction_gap must be >= 1");
    if (threads < 1) fail("threads must be >= 1");
}

Genotype decode_position(std::span<const double> position, int num_nodes) {
    std::vector<NodeIndex> genes(position.size());
    for (std::size_t i = 0; i < position.size(); ++i) {
        const double x = std::clamp(position[i], -1e9, 1e9);
        genes[i] = static_cast<NodeIndex>(std::clamp<long>(std::lround(x), 1, num_nodes));
    }
    return Genotype(std::move(genes));
}

double inertia_weight(int t, int m) { return 1.0 - static_cast<double>(t) / static_cast<double>(m); }

namespace {

std::vector<DefectReport> evaluate_positions(std::span<const Position> xs, const Scenario& sc, int threads) {
    std::vector<DefectReport> out(xs.size());
    parallel_for(xs.size(), threads, [&](std::size_t i) {
        out[i] = evaluate(sc, decode_position(xs[i], sc.num_nodes()));
    });
    return out;
}

// Sequential pBest/gBest reduction in particle order.
void absorb(Swarm& swarm, const std::vector<DefectReport>& reports) {
    for (std::size_t i = 0; i < swarm.particles.size(); ++i) {
        Particle& p = swarm.particles[i];
        if (reports[i].defect_time < p.best_report.defect_time) {
            p.best_report = reports[i];
            p.best_position = p.position;
            p.stagnation = 0;
        } else {
            ++p.stagnation;
        }
        if (reports[i].defect_time < swarm.best_report.defect_time) {
            swarm.best_report = reports[i];
            swarm.best_position = p.position;
        }
    }
    swarm.evaluations += static_cast<long long>(reports.size());
}

Millis min_defect(const std::vector<DefectReport>& reports) {
    Millis m = reports.front().defect_time;
    for (const auto& r : reports) m = std::min(m, r.defect_time);
    return m;
}

std::vector<Position> current_positions(const Swarm& swarm) {
    std::vector<Position> xs;
    xs.reserve(swarm.particles.size());
    for (const auto& p : swarm.particles) xs.push_back(p.position);
    return xs;
}

void push_history(Swarm& swarm, Millis step_best) {
    swarm.history.push_back({swarm.iteration, step_best, swarm.best_report.defect_time,
                             swarm.best_report.fitness});
}

}  // namespace

Swarm init_swarm(const Scenario& scenario, const SwarmConfig& config, std::span<const Position> starts) {
    config.validate();
    require_schedulable(scenario);
    const int n = scenario.num_nodes();
    if (n < 1) throw ScenarioError("swarm needs at least one node to schedule");
    const auto dims = static_cast<std::size_t>(genotype_length(scenario));

    Swarm swarm(config.seed);
    swarm.num_nodes = n;
    swarm.particles.resize(static_cast<std::size_t>(config.particles));
    for (std::size_t i = 0; i < swarm.particles.size(); ++i) {
        Particle& p = swarm.particles[i];
        p.position.resize(dims);
        for (auto& x : p.position) x = 1.0 + (n - 1) * swarm.rng.uniform01();
        if (i < starts.size()) {
            if (starts[i].size() != dims) throw std::invalid_argument("start position has wrong length");
            p.position = starts[i];
        }
        p.velocity.assign(dims, 0.0);
    }
    const auto reports = evaluate_positions(current_positions(swarm), scenario, config.threads);
    for (std::size_t i = 0; i < swarm.particles.size(); ++i) {
        Particle& p = swarm.particles[i];
        p.best_position = p.position;
        p.best_report = reports[i];
        if (i == 0 || reports[i].defect_time < swarm.best_report.defect_time) {
            swarm.best_report = reports[i];
            swarm.best_position = p.position;
        }
    }
    swarm.evaluations = static_cast<long long>(reports.size());
    if (config.variant == SwarmConfig::Variant::Olpso) {
        for (auto& p : swarm.particles)
            p.guidance = build_guidance(p, swarm.best_position, scenario, &swarm.evaluations);
    }
    push_history(swarm, min_defect(reports));
    return swarm;
}

void pso_step(Swarm& swarm, int t, const Scenario& scenario, const SwarmConfig& config) {
    const double w = inertia_weight(t, config.max_iterations);
    const Position gbest = swarm.best_position;
    for (auto& p : swarm.particles) {
        const double r1 = swarm.rng.uniform01();
        const double r2 = swarm.rng.uniform01();
        for (std::size_t d = 0; d < p.position.size(); ++d) {
            const double x = p.position[d];
            p.velocity[d] = w * p.velocity[d] + config.c1 * r1 * (p.best_position[d] - x) +
                            config.c2 * r2 * (gbest[d] - x);
            p.position[d] = x + p.velocity[d];
        }
    }
    const auto reports = evaluate_positions(current_positions(swarm), scenario, config.threads);
    absorb(swarm, reports);
    swarm.iteration = t;
    push_history(swarm, min_defect(reports));
}

void olpso_step(Swarm& swarm, int t, const Scenario& scenario, const SwarmConfig& config) {
    const double w = inertia_weight(t, config.max_iterations);
    const Position gbest = swarm.best_position;
    for (auto& p : swarm.particles) {
        for (std::size_t d = 0; d < p.position.size(); ++d) {
            const double r = swarm.rng.uniform01();
            const double x = p.position[d];
            const double target = p.guidance[d] == 0 ? p.best_position[d] : gbest[d];
            p.velocity[d] = w * p.velocity[d] + config.c * r * (target - x);
            p.position[d] = x + p.velocity[d];
        }
    }
    const auto reports = evaluate_positions(current_positions(swarm), scenario, config.threads);
    absorb(swarm, reports);
    for (auto& p : swarm.particles) {
        if (p.stagnation >= config.reconstruction_gap) {
            p.guidance = build_guidance(p, swarm.best_position, scenario, &swarm.evaluations);
            p.stagnation = 0;
        }
    }
    swarm.iteration = t;
    push_history(swarm, min_defect(reports));
}

std::vector<std::vector<std::uint8_t>> orthogonal_array(std::size_t factors) {
    const std::size_t rows = std::bit_ceil(factors + 1);
    std::vector<std::vector<std::uint8_t>> oa(rows, std::vector<std::uint8_t>(factors));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t j = 0; j < factors; ++j)
            oa[r][j] = static_cast<std::uint8_t>(std::popcount(r & (j + 1)) & 1);
    return oa;
}

std::vector<std::uint8_t> build_guidance(const Particle& particle, std::span<const double> global_best,
                                         const Scenario& scenario, long long* evaluations) {
    const std::size_t dims = particle.best_position.size();
    const auto oa = orthogonal_array(dims);
    std::vector<Millis> defect(oa.size());
    Position trial(dims);
    for (std::size_t r = 0; r < oa.size(); ++r) {
        for (std::size_t d = 0; d < dims; ++d)
            trial[d] = oa[r][d] == 0 ? particle.best_position[d] : global_best[d];
        defect[r] = evaluate(scenario, decode_position(trial, scenario.num_nodes())).defect_time;
    }
    if (evaluations) *evaluations += static_cast<long long>(oa.size());

    std::size_t best_row = 0;
    for (std::size_t r = 1; r < oa.size(); ++r)
        if (defect[r] < defect[best_row]) best_row = r;

    std::vector<std::uint8_t> guidance(dims);
    for (std::size_t d = 0; d < dims; ++d) {
        double sum[2] = {0.0, 0.0};
        int count[2] = {0, 0};
        for (std::size_t r = 0; r < oa.size(); ++r) {
            sum[oa[r][d]] += static_cast<double>(defect[r]);
            ++count[oa[r][d]];
        }
        const double mean0 = sum[0] / count[0];
        const double mean1 = sum[1] / count[1];
        if (mean0 < mean1) guidance[d] = 0;
        else if (mean1 < mean0) guidance[d] = 1;
        else guidance[d] = oa[best_row][d];
    }
    return guidance;
}

OptimizerResult run_swarm(const Scenario& scenario, const SwarmConfig& config, std::span<const Position> starts,
                          const SwarmObserver& observer) {
    Swarm swarm = init_swarm(scenario, config, starts);
    if (observer) observer(swarm);
    const bool olpso = config.variant == SwarmConfig::Variant::Olpso;
    for (int t = 1; t <= config.max_iterations; ++t) {
        if (config.stop_at_zero_defect && swarm.best_report.defect_time == 0) break;
        if (olpso) olpso_step(swarm, t, scenario, config);
        else pso_step(swarm, t, scenario, config);
        if (observer) observer(swarm);
    }
    return {decode_position(swarm.best_position, swarm.num_nodes), swarm.best_report,
            std::move(swarm.history), swarm.evaluations};
}

}  // namespace superframe
