#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "oracle.hpp"
#include "superframe/baselines.hpp"
#include "superframe/evaluator.hpp"
#include "superframe/ga.hpp"
#include "superframe/scenarios.hpp"

using namespace superframe;

namespace {

GaConfig quick(std::uint64_t seed, int gens = 40) {
    GaConfig c;
    c.seed = seed;
    c.max_generations = gens;
    return c;
}

std::vector<Individual> make_pop(const Scenario& sc, const std::vector<std::vector<NodeIndex>>& gs) {
    std::vector<Individual> pop;
    for (const auto& g : gs) pop.push_back({Genotype(g), evaluate(sc, Genotype(g))});
    return pop;
}

std::vector<Millis> defects(const std::vector<Individual>& pop) {
    std::vector<Millis> out;
    for (const auto& i : pop) out.push_back(i.report.defect_time);
    return out;
}

}  // namespace

TEST_CASE("config validation") {
    GaConfig c;
    CHECK_NOTHROW(c.validate());
    CHECK(c.survivor_count() == 30);
    CHECK(c.offspring_count() == 20);
    c.population_size = 1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = GaConfig{};
    c.offspring_fraction = 1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = GaConfig{};
    c.mutation_rate = 1.5;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("initial population") {
    const auto sc = table1_scenario(100);
    const auto state = init_population(sc, quick(3));
    REQUIRE(state.population.size() == 50);
    for (const auto& ind : state.population) {
        CHECK(ind.genotype.size() == 96);
        CHECK(is_valid_genotype(ind.genotype, sc));
        CHECK(ind.report == evaluate(sc, ind.genotype));
    }
    const auto again = init_population(sc, quick(3));
    for (std::size_t i = 0; i < 50; ++i) CHECK(again.population[i].genotype == state.population[i].genotype);
}

TEST_CASE("one node gives all-ones genotypes") {
    const Scenario sc(10, 30, TaskSpec{0, 0, 1, 1, 10}, {{1, 0, 2, 5, 10}});
    const auto state = init_population(sc, quick(1));
    for (const auto& ind : state.population)
        for (auto g : ind.genotype.genes()) CHECK(g == 1);
}

TEST_CASE("crossover_at") {
    std::vector<NodeIndex> a{1, 1, 1, 1}, b{2, 2, 2, 2};
    const std::size_t cut2[] = {2};
    crossover_at(a, b, cut2);
    CHECK(a == std::vector<NodeIndex>{1, 1, 2, 2});
    CHECK(b == std::vector<NodeIndex>{2, 2, 1, 1});

    a = {1, 1, 1, 1};
    b = {2, 2, 2, 2};
    const std::size_t cut0[] = {0};
    crossover_at(a, b, cut0);
    CHECK(a == std::vector<NodeIndex>{2, 2, 2, 2});  // whole swap: same pair
    const std::size_t cutL[] = {4};
    crossover_at(a, b, cutL);
    CHECK(a == std::vector<NodeIndex>{2, 2, 2, 2});

    a = {1, 1, 1, 1, 1, 1};
    b = {2, 2, 2, 2, 2, 2};
    const std::size_t two[] = {1, 4};
    crossover_at(a, b, two);
    CHECK(a == std::vector<NodeIndex>{1, 2, 2, 2, 1, 1});
    CHECK(b == std::vector<NodeIndex>{2, 1, 1, 1, 2, 2});
}

TEST_CASE("crossover with p_c = 0 copies the parents") {
    const auto sc = table1_scenario(25);
    Rng rng(5);
    std::vector<std::vector<NodeIndex>> gs;
    for (int p = 0; p < 6; ++p) {
        std::vector<NodeIndex> g(24);
        for (auto& x : g) x = static_cast<NodeIndex>(rng.uniform_int(1, 4));
        gs.push_back(g);
    }
    const auto parents = make_pop(sc, gs);
    GaConfig c;
    c.crossover_rate = 0.0;
    auto kids = crossover(parents, c, rng);
    REQUIRE(kids.size() == parents.size());
    std::vector<std::vector<NodeIndex>> got;
    for (const auto& k : kids) got.emplace_back(k.genes().begin(), k.genes().end());
    std::sort(got.begin(), got.end());
    std::sort(gs.begin(), gs.end());
    CHECK(got == gs);
}

TEST_CASE("every crossover kind keeps each gene position from one of the parents") {
    const auto sc = table1_scenario(25);
    const std::vector<NodeIndex> a(24, 1), b(24, 2);
    for (auto kind : {GaConfig::Crossover::SinglePoint, GaConfig::Crossover::MultiPoint, GaConfig::Crossover::Uniform}) {
        GaConfig c;
        c.crossover = kind;
        c.crossover_rate = 1.0;
        c.crossover_points = 3;
        Rng rng(9);
        for (int rep = 0; rep < 20; ++rep) {
            const auto kids = crossover(make_pop(sc, {a, b}), c, rng);
            REQUIRE(kids.size() == 2);
            for (std::size_t i = 0; i < 24; ++i) CHECK(kids[0][i] + kids[1][i] == 3);
            if (kind == GaConfig::Crossover::SinglePoint) {
                // one switch point, strictly inside
                int switches = 0;
                for (std::size_t i = 1; i < 24; ++i) switches += kids[0][i] != kids[0][i - 1];
                CHECK(switches == 1);
            }
            if (kind == GaConfig::Crossover::MultiPoint) {
                int switches = 0;
                for (std::size_t i = 1; i < 24; ++i) switches += kids[0][i] != kids[0][i - 1];
                CHECK(switches == 3);
            }
        }
    }
}

TEST_CASE("mutation") {
    GaConfig c;
    Rng rng(17);
    std::vector<Genotype> kids{Genotype(std::vector<NodeIndex>(100, 2))};

    c.mutation_rate = 0.0;
    mutate(kids, c, 4, rng);
    CHECK(kids[0] == Genotype(std::vector<NodeIndex>(100, 2)));

    // n = 1: every reset draws the only node
    std::vector<Genotype> ones{Genotype(std::vector<NodeIndex>(50, 1))};
    c.mutation_rate = 1.0;
    mutate(ones, c, 1, rng);
    CHECK(ones[0] == Genotype(std::vector<NodeIndex>(50, 1)));

    // p_m = 1, n = 4: a gene changes with probability 3/4
    std::vector<Genotype> many(100, Genotype(std::vector<NodeIndex>(100, 2)));
    mutate(many, c, 4, rng);
    int changed = 0;
    for (const auto& g : many)
        for (auto x : g.genes()) {
            CHECK(x >= 1);
            CHECK(x <= 4);
            changed += x != 2;
        }
    const double sigma = std::sqrt(10000 * 0.75 * 0.25);
    CHECK(std::abs(changed - 7500) <= 3 * sigma);

    // gaussian creep stays in range
    c.mutator = GaConfig::Mutator::Gaussian;
    c.gaussian_sigma = 3.0;
    std::vector<Genotype> creep(10, Genotype(std::vector<NodeIndex>(100, 4)));
    mutate(creep, c, 4, rng);
    for (const auto& g : creep)
        for (auto x : g.genes()) CHECK((x >= 1 && x <= 4));
}

TEST_CASE("truncation survivors are the top individuals") {
    const auto sc = table1_scenario(100);
    auto state = init_population(sc, quick(2));
    GaConfig c = quick(2);
    c.selection = GaConfig::Selection::Truncate;
    c.population_size = 50;
    c.offspring_fraction = 0.96;  // N = 2
    REQUIRE(c.survivor_count() == 2);
    const auto top = select_survivors(state, c);
    auto sorted = defects(state.population);
    std::sort(sorted.begin(), sorted.end());
    CHECK(defects(top) == std::vector<Millis>{sorted[0], sorted[1]});
}

TEST_CASE("truncation keeping everyone leaves the population unchanged") {
    const auto sc = table1_scenario(100);
    GaConfig c = quick(4, 1);
    c.selection = GaConfig::Selection::Truncate;
    c.offspring_fraction = 0.005;  // round(49.75) = 50 survivors, no offspring
    REQUIRE(c.offspring_count() == 0);
    auto state = init_population(sc, c);
    auto before = defects(state.population);
    const auto kept = select_survivors(state, c);
    auto after = defects(kept);
    std::sort(before.begin(), before.end());
    CHECK(after == before);
}

TEST_CASE("tournament of the whole population picks the global best") {
    const auto sc = table1_scenario(100);
    auto state = init_population(sc, quick(8));
    const auto best = *std::min_element(state.population.begin(), state.population.end(),
        [](const Individual& a, const Individual& b) { return a.report.defect_time < b.report.defect_time; });
    for (int i = 0; i < 20; ++i) {
        const auto idx = tournament_pick(state.population, 50, state.rng);
        CHECK(state.population[idx].report.defect_time == best.report.defect_time);
    }
}

TEST_CASE("tournament survivors always include the current best") {
    const auto sc = table1_scenario(100);
    auto state = init_population(sc, quick(12));
    const auto best = std::min_element(state.population.begin(), state.population.end(),
        [](const Individual& a, const Individual& b) { return a.report.defect_time < b.report.defect_time; });
    const auto s = select_survivors(state, quick(12));
    CHECK(s.size() == 30);
    CHECK(std::any_of(s.begin(), s.end(), [&](const Individual& i) { return i.genotype == best->genotype; }));
}

TEST_CASE("evolution stops at generation 0 when a zero-defect genotype is present") {
    const Scenario sc(10, 10, TaskSpec{0, 0, 1, 1, 5}, {{1, 1, 4, 4, 5}});
    const auto r = evolve(sc, quick(1, 100));
    CHECK(r.report.defect_time == 0);
    CHECK(r.history.size() == 1);
}

TEST_CASE("GA reaches the exhaustive minimum on the canonical toy") {
    const auto sc = oracle::toy_family().front();
    const long long best = oracle::exhaustive_genotype_min(sc);
    const auto r = evolve(sc, quick(1, 200));
    CHECK(r.report.defect_time == best);
}

TEST_CASE("GA runs are reproducible and thread-count independent") {
    const auto sc = table1_scenario(100);
    GaConfig c = quick(21, 60);
    const auto a = evolve(sc, c);
    const auto b = evolve(sc, c);
    c.threads = 3;
    const auto t = evolve(sc, c);
    CHECK(a.best == b.best);
    CHECK(a.best == t.best);
    CHECK(a.history.size() == t.history.size());
    for (std::size_t i = 0; i < a.history.size(); ++i) {
        CHECK(a.history[i].best_so_far_defect == t.history[i].best_so_far_defect);
        CHECK(a.history[i].step_best_defect == b.history[i].step_best_defect);
    }
}

TEST_CASE("GA history is monotone and every population is valid") {
    const auto sc = random_scenario(7, 100, 2031);
    int gens_seen = 0;
    const auto r = evolve(sc, quick(5, 50), [&](const EvolutionState& s) {
        ++gens_seen;
        CHECK(s.population.size() == 50);
        for (const auto& ind : s.population) CHECK(is_valid_genotype(ind.genotype, sc));
    });
    CHECK(gens_seen == static_cast<int>(r.history.size()));
    for (std::size_t i = 1; i < r.history.size(); ++i)
        CHECK(r.history[i].best_so_far_defect <= r.history[i - 1].best_so_far_defect);
    CHECK(r.report == evaluate(sc, r.best));
}

TEST_CASE("stall limit stops the run") {
    const auto sc = table1_scenario(100);
    GaConfig c = quick(1, 1000);
    c.stall_generations = 5;
    c.crossover_rate = 0.0;
    c.mutation_rate = 0.0;
    const auto r = evolve(sc, c);
    CHECK(r.history.size() == 6);  // generation 0 plus five without improvement
}

TEST_CASE("MGA seeds the converted DMS genotype") {
    for (Slots n : {100, 200}) {
        const auto sc = table1_scenario(n);
        const auto ga = init_population(sc, quick(6));
        const auto mga = mga_init(sc, quick(6));
        const auto dms = defect_time(dms_schedule(sc), sc).defect_time;
        CHECK(mga.best.report.defect_time <= ga.best.report.defect_time);
        CHECK(mga.best.report.defect_time <= dms);
        CHECK(mga.history.front().best_so_far_defect == mga.best.report.defect_time);
        const auto converted = dms_to_genotype(dms_schedule(sc), sc);
        CHECK(std::any_of(mga.population.begin(), mga.population.end(),
                          [&](const Individual& i) { return i.genotype == converted; }));
        CHECK(mga_evolve(sc, quick(6, 30)).report.defect_time <= dms);
    }
}

TEST_CASE("optimizer refuses unschedulable or empty scenarios") {
    const TaskSpec beacon{0, 0, 1, 1, 25};
    CHECK_THROWS_AS(evolve(Scenario(10, 50, beacon, {{1, 0, 3, 2, 5}}), quick(1)), UnschedulableError);
    CHECK_THROWS_AS(mga_evolve(Scenario(10, 50, beacon, {{1, 0, 3, 2, 5}}), quick(1)), UnschedulableError);
    CHECK_THROWS_AS(evolve(Scenario(10, 50, beacon, {}), quick(1)), ScenarioError);
}
