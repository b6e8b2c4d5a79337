#pragma once

// Generational GA over slot-assignment genotypes, and the DMS-seeded variant
// (MGA) that swaps the worst initial individual for the converted DMS
// schedule.
//
// One generation:
//   S_g = select N survivors from P_{g-1}          (copied unchanged, best always kept)
//   O_g = select |P| - N parents from P_{g-1}
//   O_g = crossover(O_g), then mutate(O_g)
//   P_g = S_g + O_g, evaluate O_g

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "superframe/model.hpp"
#include "superframe/optimizer.hpp"
#include "superframe/rng.hpp"

namespace superframe {

struct GaConfig {
    enum class Selection { Tournament, Truncate };
    enum class Crossover { SinglePoint, MultiPoint, Uniform };
    enum class Mutator { RandomReset, Gaussian };

    int population_size = 50;
    int max_generations = 1000;
    int stall_generations = 1000;
    Selection selection = Selection::Tournament;
    int tournament_size = 3;
    double offspring_fraction = 0.4;
    Crossover crossover = Crossover::SinglePoint;
    int crossover_points = 2;  // MultiPoint only
    double crossover_rate = 0.2;
    Mutator mutator = Mutator::RandomReset;
    double mutation_rate = 0.001;
    double gaussian_sigma = 1.0;  // Gaussian (creep) mutator only
    bool stop_at_zero_defect = true;
    std::uint64_t seed = 0;
    int threads = 1;  // fitness evaluation workers; results do not depend on it

    /// N = round(population_size * (1 - offspring_fraction)).
    int survivor_count() const;
    int offspring_count() const { return population_size - survivor_count(); }

    /// Throws std::invalid_argument on an unusable configuration.
    void validate() const;
};

struct Individual {
    Genotype genotype;
    DefectReport report;
};

struct EvolutionState {
    explicit EvolutionState(std::uint64_t seed) : rng(seed) {}

    int generation = 0;
    std::vector<Individual> population;
    std::vector<Individual> survivors;
    std::vector<Individual> offspring;
    Individual best;
    std::vector<HistoryPoint> history;
    int stall = 0;
    long long evaluations = 0;
    Rng rng;
};

/// Random initial population, evaluated. Requires a schedulable scenario
/// with at least one node.
EvolutionState init_population(const Scenario& scenario, const GaConfig& config);

std::vector<Individual> select_survivors(EvolutionState& state, const GaConfig& config);
std::vector<Individual> select_parents(EvolutionState& state, const GaConfig& config);

/// Best of k distinct, uniformly drawn individuals (ties: lowest index).
std::size_t tournament_pick(std::span<const Individual> pop, int k, Rng& rng);

/// Deterministic recombination of one pair at the given sorted cut points;
/// segments between cuts alternate between the parents.
void crossover_at(std::vector<NodeIndex>& a, std::vector<NodeIndex>& b, std::span<const std::size_t> cuts);

/// Pairs shuffled parents and recombines each pair with probability p_c.
/// Returned genotypes are unevaluated.
std::vector<Genotype> crossover(std::vector<Individual> parents, const GaConfig& config, Rng& rng);

void mutate(std::vector<Genotype>& offspring, const GaConfig& config, int num_nodes, Rng& rng);

/// Called with the initial state and after every generation.
using GaObserver = std::function<void(const EvolutionState&)>;

/// Runs generations from `state` until a termination rule fires.
OptimizerResult evolve_from(EvolutionState state, const Scenario& scenario, const GaConfig& config,
                            const GaObserver& observer = {});

OptimizerResult evolve(const Scenario& scenario, const GaConfig& config, const GaObserver& observer = {});

/// Replace the worst individual (highest defect, first on ties) by `injected`.
void replace_worst(EvolutionState& state, const Scenario& scenario, const Genotype& injected);

/// GA whose initial population carries the converted DMS schedule.
EvolutionState mga_init(const Scenario& scenario, const GaConfig& config);
OptimizerResult mga_evolve(const Scenario& scenario, const GaConfig& config, const GaObserver& observer = {});

}  // namespace superframe
