#pragma once

// Particle swarm comparators over continuous positions.
//
// A position has one real coordinate per gene and decodes to a genotype by
// rounding half away from zero and clamping to [1, n].
//
// PSO velocity, iteration t in 1..m:
//   v(t) = (1 - t/m) v(t-1) + c1 r1 (pBest - x) + c2 r2 (gBest - x),  x += v
//   with r1, r2 drawn once per particle per step.
//
// OLPSO velocity, per dimension d:
//   v_d(t) = (1 - t/m) v_d(t-1) + c r_d (o_d - x_d),  x_d += v_d
//   where o_d is pBest_d or gBest_d as chosen by the particle's guidance
//   vector, and r_d is drawn per dimension. The guidance vector comes from an
//   orthogonal experiment over the two sources and is rebuilt whenever the
//   particle's pBest has not improved for `reconstruction_gap` steps.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "superframe/model.hpp"
#include "superframe/optimizer.hpp"
#include "superframe/rng.hpp"

namespace superframe {

struct SwarmConfig {
    enum class Variant { Pso, Olpso };

    int particles = 50;
    int max_iterations = 1000;
    double c1 = 2.0;
    double c2 = 2.0;
    double c = 2.0;  // OLPSO single acceleration coefficient
    Variant variant = Variant::Pso;
    int reconstruction_gap = 5;
    bool stop_at_zero_defect = true;
    std::uint64_t seed = 0;
    int threads = 1;

    void validate() const;
};

using Position = std::vector<double>;

struct Particle {
    Position position;
    Position velocity;
    Position best_position;
    DefectReport best_report;
    std::vector<std::uint8_t> guidance;  // OLPSO: 0 follow pBest, 1 follow gBest
    int stagnation = 0;
};

struct Swarm {
    explicit Swarm(std::uint64_t seed) : rng(seed) {}

    std::vector<Particle> particles;
    Position best_position;
    DefectReport best_report;
    int iteration = 0;
    int num_nodes = 1;
    long long evaluations = 0;
    std::vector<HistoryPoint> history;
    Rng rng;
};

Genotype decode_position(std::span<const double> position, int num_nodes);

/// Positions uniform in [1, n], zero velocity, evaluated. `starts` overrides
/// the first particles' initial positions.
Swarm init_swarm(const Scenario& scenario, const SwarmConfig& config,
                 std::span<const Position> starts = {});

/// Inertia weight (1 - t/m).
double inertia_weight(int t, int m);

void pso_step(Swarm& swarm, int t, const Scenario& scenario, const SwarmConfig& config);
void olpso_step(Swarm& swarm, int t, const Scenario& scenario, const SwarmConfig& config);

/// Two-level orthogonal array with `factors` columns and 2^ceil(log2(factors+1))
/// rows; entry (r, j) = parity(r & (j+1)).
std::vector<std::vector<std::uint8_t>> orthogonal_array(std::size_t factors);

/// Orthogonal experiment over "take from pBest" (0) / "take from gBest" (1)
/// per dimension. Each level is scored by the mean defect of the rows using
/// it; ties go to the level of the best row. Costs one evaluation per row.
std::vector<std::uint8_t> build_guidance(const Particle& particle, std::span<const double> global_best,
                                         const Scenario& scenario, long long* evaluations = nullptr);

/// Called with the initial swarm and after every iteration.
using SwarmObserver = std::function<void(const Swarm&)>;

OptimizerResult run_swarm(const Scenario& scenario, const SwarmConfig& config,
                          std::span<const Position> starts = {}, const SwarmObserver& observer = {});

}  // namespace superframe
