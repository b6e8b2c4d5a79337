#include "doctest.h"

#include <cmath>

#include "oracle.hpp"
#include "superframe/evaluator.hpp"
#include "superframe/pso.hpp"
#include "superframe/scenarios.hpp"

using namespace superframe;

namespace {

SwarmConfig quick(std::uint64_t seed, SwarmConfig::Variant v = SwarmConfig::Variant::Pso, int iters = 30) {
    SwarmConfig c;
    c.seed = seed;
    c.variant = v;
    c.max_iterations = iters;
    c.particles = 20;
    return c;
}

// Scenario whose genotype has exactly three genes.
Scenario three_gene_scenario() {
    return Scenario(10, 5, TaskSpec{0, 0, 2, 2, 5}, {{1, 2, 1, 2, 5}, {2, 2, 1, 3, 5}});
}

}  // namespace

TEST_CASE("position decoding rounds half away from zero and clamps") {
    const std::vector<double> x{1.0, 7.9, 2.5, -3.0, 1.49, 3.5, 0.5};
    const auto g = decode_position(x, 4);
    CHECK(std::vector<NodeIndex>(g.genes().begin(), g.genes().end()) == std::vector<NodeIndex>{1, 4, 3, 1, 1, 4, 1});
}

TEST_CASE("inertia weight") {
    CHECK(inertia_weight(0, 10) == 1.0);
    CHECK(inertia_weight(5, 10) == 0.5);
    CHECK(inertia_weight(10, 10) == 0.0);
}

TEST_CASE("initial swarm") {
    const auto sc = table1_scenario(100);
    const auto s = init_swarm(sc, quick(1));
    REQUIRE(s.particles.size() == 20);
    for (const auto& p : s.particles) {
        CHECK(p.position.size() == 96);
        for (double x : p.position) CHECK((x >= 1.0 && x <= 4.0));
        for (double v : p.velocity) CHECK(v == 0.0);
        CHECK(p.best_report == evaluate(sc, decode_position(p.position, 4)));
        CHECK(s.best_report.defect_time <= p.best_report.defect_time);
    }
}

TEST_CASE("a particle sitting on pBest = gBest with zero velocity stays put") {
    const auto sc = table1_scenario(25);
    const SwarmConfig c = quick(1);
    Swarm s = init_swarm(sc, c);
    const Position x = s.best_position;
    for (auto& p : s.particles) {
        p.position = x;
        p.best_position = x;
        std::fill(p.velocity.begin(), p.velocity.end(), 0.0);
    }
    pso_step(s, 1, sc, c);
    for (const auto& p : s.particles) CHECK(p.position == x);
}

TEST_CASE("at t = m the previous velocity is forgotten") {
    const auto sc = table1_scenario(25);
    const SwarmConfig c = quick(1);
    Swarm s = init_swarm(sc, c);
    const Position x = s.best_position;
    for (auto& p : s.particles) {
        p.position = x;
        p.best_position = x;
        std::fill(p.velocity.begin(), p.velocity.end(), 5.0);
    }
    pso_step(s, c.max_iterations, sc, c);
    for (const auto& p : s.particles)
        for (double v : p.velocity) CHECK(v == 0.0);
}

TEST_CASE("without attraction the velocity decays by the inertia product") {
    const auto sc = table1_scenario(25);
    SwarmConfig c = quick(1);
    Swarm s = init_swarm(sc, c);
    c.c1 = 0.0;
    c.c2 = 0.0;
    s.particles.resize(1);
    auto& p = s.particles[0];
    std::fill(p.velocity.begin(), p.velocity.end(), 0.8);
    const Position x0 = p.position;
    double v = 0.8, moved = 0.0;
    for (int t = 1; t <= 5; ++t) {
        pso_step(s, t, sc, c);
        v *= 1.0 - static_cast<double>(t) / c.max_iterations;
        moved += v;
        for (std::size_t d = 0; d < x0.size(); ++d) {
            CHECK(p.velocity[d] == doctest::Approx(v));
            CHECK(p.position[d] == doctest::Approx(x0[d] + moved));
        }
    }
}

TEST_CASE("orthogonal array for three factors is L4") {
    const auto oa = orthogonal_array(3);
    const std::vector<std::vector<std::uint8_t>> l4{{0, 0, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 0}};
    CHECK(oa == l4);
    // balance and pairwise orthogonality for a larger array
    const auto big = orthogonal_array(10);
    CHECK(big.size() == 16);
    for (std::size_t a = 0; a < 10; ++a) {
        int ones = 0;
        for (const auto& row : big) ones += row[a];
        CHECK(ones == 8);
        for (std::size_t b = a + 1; b < 10; ++b) {
            int both = 0;
            for (const auto& row : big) both += row[a] & row[b];
            CHECK(both == 4);
        }
    }
}

TEST_CASE("guidance over three dimensions costs four evaluations") {
    const auto sc = three_gene_scenario();
    REQUIRE(genotype_length(sc) == 3);
    Particle p;
    p.best_position = {1.0, 1.0, 1.0};
    const std::vector<double> g{2.0, 2.0, 2.0};
    long long evals = 0;
    const auto guide = build_guidance(p, g, sc, &evals);
    CHECK(evals == 4);
    CHECK(guide.size() == 3);

    // a guidance choice has to score no worse than the all-pBest row by level mean
    const auto oa = orthogonal_array(3);
    for (std::size_t d = 0; d < 3; ++d) {
        double mean[2] = {0, 0};
        for (const auto& row : oa) {
            Position t(3);
            for (std::size_t k = 0; k < 3; ++k) t[k] = row[k] == 0 ? p.best_position[k] : g[k];
            mean[row[d]] += static_cast<double>(evaluate(sc, decode_position(t, 2)).defect_time) / 2.0;
        }
        if (mean[0] != mean[1]) CHECK(guide[d] == (mean[1] < mean[0] ? 1 : 0));
    }
}

TEST_CASE("when pBest equals gBest the guidance vector does not matter") {
    const auto sc = table1_scenario(25);
    const SwarmConfig c = quick(3, SwarmConfig::Variant::Olpso);
    Swarm a = init_swarm(sc, c);
    for (auto& p : a.particles) p.best_position = a.best_position;
    Swarm b = a;
    for (auto& p : a.particles) std::fill(p.guidance.begin(), p.guidance.end(), 0);
    for (auto& p : b.particles) std::fill(p.guidance.begin(), p.guidance.end(), 1);
    olpso_step(a, 1, sc, c);
    olpso_step(b, 1, sc, c);
    for (std::size_t i = 0; i < a.particles.size(); ++i) CHECK(a.particles[i].position == b.particles[i].position);
}

TEST_CASE("an injected zero-defect start is found immediately") {
    const Scenario sc(10, 10, TaskSpec{0, 0, 1, 1, 5}, {{1, 1, 2, 2, 5}, {2, 3, 2, 2, 5}});
    const Genotype g({1, 1, 2, 2, 1, 1, 2, 2});
    REQUIRE(evaluate(sc, g).defect_time == 0);
    const Position start(g.genes().begin(), g.genes().end());
    for (auto v : {SwarmConfig::Variant::Pso, SwarmConfig::Variant::Olpso}) {
        const std::vector<Position> starts{start};
        const auto r = run_swarm(sc, quick(1, v), starts);
        CHECK(r.report.defect_time == 0);
        CHECK(r.history.size() == 1);
    }
}

TEST_CASE("swarm runs are monotone, valid and reproducible") {
    const auto sc = random_scenario(7, 100, 2031);
    for (auto v : {SwarmConfig::Variant::Pso, SwarmConfig::Variant::Olpso}) {
        const auto c = quick(4, v, 15);
        const auto r = run_swarm(sc, c, {}, [&](const Swarm& s) {
            for (const auto& p : s.particles) CHECK(is_valid_genotype(decode_position(p.position, 7), sc));
        });
        for (std::size_t i = 1; i < r.history.size(); ++i)
            CHECK(r.history[i].best_so_far_defect <= r.history[i - 1].best_so_far_defect);
        CHECK(r.report == evaluate(sc, r.best));
        auto threaded = c;
        threaded.threads = 3;
        const auto again = run_swarm(sc, threaded);
        CHECK(again.best == r.best);
        CHECK(again.evaluations == r.evaluations);
    }
}

TEST_CASE("swarm results never beat the exhaustive minimum on the toy") {
    const auto sc = oracle::toy_family().front();
    const long long best = oracle::exhaustive_genotype_min(sc);
    for (auto v : {SwarmConfig::Variant::Pso, SwarmConfig::Variant::Olpso})
        CHECK(run_swarm(sc, quick(2, v, 50)).report.defect_time >= best);
}

TEST_CASE("swarm refuses unschedulable scenarios") {
    const Scenario bad(10, 50, TaskSpec{0, 0, 1, 1, 25}, {{1, 0, 3, 2, 5}});
    CHECK_THROWS_AS(run_swarm(bad, quick(1)), UnschedulableError);
    CHECK_THROWS_AS(run_swarm(bad, quick(1, SwarmConfig::Variant::Olpso)), UnschedulableError);
}
