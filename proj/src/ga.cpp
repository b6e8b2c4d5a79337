#include "superframe/ga.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "superframe/baselines.hpp"
#include "superframe/evaluator.hpp"
#include "superframe/parallel.hpp"

namespace superframe {

int GaConfig::survivor_count() const {
    return static_cast<int>(std::lround(population_size * (1.0 - offspring_fraction)));
}

void GaConfig::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("GaConfig: " + what); };
    if (population_size < 2) fail("population_size must be at least 2");
    if (max_generations < 0) fail("max_generations must be >= 0");
    if (stall_generations < 1) fail("stall_generations must be >= 1");
    if (!(offspring_fraction > 0.0 && offspring_fraction < 1.0)) fail("offspring_fraction must be in (0, 1)");
    if (survivor_count() < 1) fail("survivor count rounds to zero");
    if (tournament_size < 1) fail("tournament_size must be >= 1");
    if (crossover_points < 1) fail("crossover_points must be >= 1");
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) fail("crossover_rate must be in [0, 1]");
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) fail("mutation_rate must be in [0, 1]");
    if (!(gaussian_sigma > 0.0)) fail("gaussian_sigma must be positive");
    if (threads < 1) fail("threads must be >= 1");
}

namespace {

bool better(const Individual& a, const Individual& b) {
    return a.report.defect_time < b.report.defect_time;
}

std::size_t best_index(std::span<const Individual> pop) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < pop.size(); ++i)
        if (better(pop[i], pop[best])) best = i;
    return best;
}

std::vector<Individual> evaluate_all(std::vector<Genotype> genotypes, const Scenario& sc, int threads) {
    std::vector<Individual> out(genotypes.size());
    parallel_for(genotypes.size(), threads, [&](std::size_t i) {
        out[i].report = evaluate(sc, genotypes[i]);
        out[i].genotype = std::move(genotypes[i]);
    });
    return out;
}

// Indices ordered best first; equal defects keep population order.
std::vector<std::size_t> ranked(std::span<const Individual> pop) {
    std::vector<std::size_t> idx(pop.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return better(pop[a], pop[b]); });
    return idx;
}

void record_step(EvolutionState& state) {
    const Individual& step_best = state.population[best_index(state.population)];
    if (better(step_best, state.best)) {
        state.best = step_best;
        state.stall = 0;
    } else {
        ++state.stall;
    }
    state.history.push_back({state.generation, step_best.report.defect_time,
                             state.best.report.defect_time, state.best.report.fitness});
}

}  // namespace

EvolutionState init_population(const Scenario& scenario, const GaConfig& config) {
    config.validate();
    require_schedulable(scenario);
    const int n = scenario.num_nodes();
    if (n < 1) throw ScenarioError("GA needs at least one node to schedule");

    EvolutionState state(config.seed);
    const auto len = static_cast<std::size_t>(genotype_length(scenario));
    std::vector<Genotype> genotypes;
    genotypes.reserve(static_cast<std::size_t>(config.population_size));
    for (int p = 0; p < config.population_size; ++p) {
        std::vector<NodeIndex> genes(len);
        for (auto& g : genes) g = static_cast<NodeIndex>(state.rng.uniform_int(1, n));
        genotypes.emplace_back(std::move(genes));
    }
    state.population = evaluate_all(std::move(genotypes), scenario, config.threads);
    state.evaluations = config.population_size;
    state.best = state.population[best_index(state.population)];
    state.history.push_back({0, state.best.report.defect_time, state.best.report.defect_time,
                             state.best.report.fitness});
    return state;
}

std::size_t tournament_pick(std::span<const Individual> pop, int k, Rng& rng) {
    // k distinct contenders via a partial Fisher-Yates shuffle
    std::vector<std::size_t> idx(pop.size());
    std::iota(idx.begin(), idx.end(), 0);
    const std::size_t draws = std::min<std::size_t>(static_cast<std::size_t>(k), idx.size());
    std::size_t winner = 0;
    for (std::size_t i = 0; i < draws; ++i) {
        const auto j = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(i),
                                                                static_cast<std::int64_t>(idx.size()) - 1));
        std::swap(idx[i], idx[j]);
        if (i == 0 || better(pop[idx[i]], pop[winner]) ||
            (!better(pop[winner], pop[idx[i]]) && idx[i] < winner))
            winner = idx[i];
    }
    return winner;
}

std::vector<Individual> select_survivors(EvolutionState& state, const GaConfig& config) {
    const auto n = static_cast<std::size_t>(config.survivor_count());
    const auto& pop = state.population;
    std::vector<Individual> out;
    out.reserve(n);
    if (config.selection == GaConfig::Selection::Truncate) {
        const auto order = ranked(pop);
        for (std::size_t i = 0; i < n && i < order.size(); ++i) out.push_back(pop[order[i]]);
        return out;
    }
    out.push_back(pop[best_index(pop)]);
    while (out.size() < n) out.push_back(pop[tournament_pick(pop, config.tournament_size, state.rng)]);
    return out;
}

std::vector<Individual> select_parents(EvolutionState& state, const GaConfig& config) {
    const auto n = static_cast<std::size_t>(config.offspring_count());
    const auto& pop = state.population;
    std::vector<Individual> out;
    out.reserve(n);
    if (config.selection == GaConfig::Selection::Truncate) {
        const auto order = ranked(pop);
        for (std::size_t i = 0; i < n && i < order.size(); ++i) out.push_back(pop[order[i]]);
        return out;
    }
    while (out.size() < n) out.push_back(pop[tournament_pick(pop, config.tournament_size, state.rng)]);
    return out;
}

void crossover_at(std::vector<NodeIndex>& a, std::vector<NodeIndex>& b, std::span<const std::size_t> cuts) {
    const std::size_t len = std::min(a.size(), b.size());
    bool swapping = false;
    std::size_t from = 0;
    for (std::size_t c = 0; c <= cuts.size(); ++c) {
        const std::size_t to = c < cuts.size() ? std::min(cuts[c], len) : len;
        if (swapping)
            for (std::size_t i = from; i < to; ++i) std::swap(a[i], b[i]);
        from = std::max(from, to);
        swapping = !swapping;
    }
}

std::vector<Genotype> crossover(std::vector<Individual> parents, const GaConfig& config, Rng& rng) {
    for (std::size_t i = parents.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
        std::swap(parents[i - 1], parents[j]);
    }
    std::vector<Genotype> out;
    out.reserve(parents.size());
    std::size_t i = 0;
    for (; i + 1 < parents.size(); i += 2) {
        auto a = parents[i].genotype.genes();
        auto b = parents[i + 1].genotype.genes();
        std::vector<NodeIndex> ca(a.begin(), a.end());
        std::vector<NodeIndex> cb(b.begin(), b.end());
        if (rng.bernoulli(config.crossover_rate) && ca.size() >= 2) {
            const std::size_t len = ca.size();
            switch (config.crossover) {
                case GaConfig::Crossover::SinglePoint: {
                    const std::size_t cut[] = {static_cast<std::size_t>(
                        rng.uniform_int(1, static_cast<std::int64_t>(len) - 1))};
                    crossover_at(ca, cb, cut);
                    break;
                }
                case GaConfig::Crossover::MultiPoint: {
                    const auto m = std::min<std::size_t>(static_cast<std::size_t>(config.crossover_points), len - 1);
                    std::vector<std::size_t> cuts;
                    while (cuts.size() < m) {
                        const auto c = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(len) - 1));
                        if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
                    }
                    std::sort(cuts.begin(), cuts.end());
                    crossover_at(ca, cb, cuts);
                    break;
                }
                case GaConfig::Crossover::Uniform:
                    for (std::size_t g = 0; g < len; ++g)
                        if (rng.bernoulli(0.5)) std::swap(ca[g], cb[g]);
                    break;
            }
        }
        out.emplace_back(std::move(ca));
        out.emplace_back(std::move(cb));
    }
    if (i < parents.size()) out.push_back(parents[i].genotype);
    return out;
}

void mutate(std::vector<Genotype>& offspring, const GaConfig& config, int num_nodes, Rng& rng) {
    for (auto& g : offspring) {
        for (auto& gene : g.mutable_genes()) {
            if (!rng.bernoulli(config.mutation_rate)) continue;
            if (config.mutator == GaConfig::Mutator::RandomReset) {
                gene = static_cast<NodeIndex>(rng.uniform_int(1, num_nodes));
            } else {
                const auto step = std::lround(config.gaussian_sigma * rng.normal());
                gene = static_cast<NodeIndex>(std::clamp<long>(gene + step, 1, num_nodes));
            }
        }
    }
}

OptimizerResult evolve_from(EvolutionState state, const Scenario& scenario, const GaConfig& config,
                            const GaObserver& observer) {
    config.validate();
    if (observer) observer(state);
    const int n = scenario.num_nodes();
    auto done = [&] {
        if (state.generation >= config.max_generations) return true;
        if (state.stall >= config.stall_generations) return true;
        return config.stop_at_zero_defect && state.best.report.defect_time == 0;
    };
    while (!done()) {
        ++state.generation;
        state.survivors = select_survivors(state, config);
        auto parents = select_parents(state, config);
        auto children = crossover(std::move(parents), config, state.rng);
        mutate(children, config, n, state.rng);
        state.evaluations += static_cast<long long>(children.size());
        state.offspring = evaluate_all(std::move(children), scenario, config.threads);

        state.population.clear();
        state.population.insert(state.population.end(), state.survivors.begin(), state.survivors.end());
        state.population.insert(state.population.end(), state.offspring.begin(), state.offspring.end());
        record_step(state);
        if (observer) observer(state);
    }
    return {state.best.genotype, state.best.report, std::move(state.history), state.evaluations};
}

OptimizerResult evolve(const Scenario& scenario, const GaConfig& config, const GaObserver& observer) {
    return evolve_from(init_population(scenario, config), scenario, config, observer);
}

void replace_worst(EvolutionState& state, const Scenario& scenario, const Genotype& injected) {
    auto& pop = state.population;
    std::size_t worst = 0;
    for (std::size_t i = 1; i < pop.size(); ++i)
        if (pop[i].report.defect_time > pop[worst].report.defect_time) worst = i;
    pop[worst] = Individual{injected, evaluate(scenario, injected)};
    ++state.evaluations;
    if (better(pop[worst], state.best)) state.best = pop[worst];
    if (!state.history.empty() && state.history.back().step == state.generation) {
        auto& h = state.history.back();
        h.step_best_defect = pop[best_index(pop)].report.defect_time;
        h.best_so_far_defect = state.best.report.defect_time;
        h.best_so_far_fitness = state.best.report.fitness;
    }
}

EvolutionState mga_init(const Scenario& scenario, const GaConfig& config) {
    EvolutionState state = init_population(scenario, config);
    replace_worst(state, scenario, dms_to_genotype(dms_schedule(scenario), scenario));
    return state;
}

OptimizerResult mga_evolve(const Scenario& scenario, const GaConfig& config, const GaObserver& observer) {
    return evolve_from(mga_init(scenario, config), scenario, config, observer);
}

}  // namespace superframe
