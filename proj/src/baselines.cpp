#include "superframe/baselines.hpp"

#include <string>

namespace superframe {

ExecutionTrace dms_schedule(const Scenario& scenario) {
    return simulate_priority(scenario, PriorityPolicy::deadline_monotonic());
}

ExecutionTrace edf_schedule(const Scenario& scenario) {
    return simulate_priority(scenario, PriorityPolicy::earliest_deadline_first());
}

namespace {

Slots next_release_after(const TaskSpec& t, Slots slot) {
    if (t.release > slot) return t.release;
    const Slots k = (slot - t.release) / t.period + 1;
    return t.release + k * t.period;
}

// Node released soonest after `slot`; ties favour the shorter deadline, then
// the lower id, matching the order DMS would run them.
NodeIndex filler_for_idle(const Scenario& sc, Slots slot) {
    NodeIndex best = 1;
    for (NodeIndex k = 2; k <= sc.num_nodes(); ++k) {
        const TaskSpec& a = sc.stream(k);
        const TaskSpec& b = sc.stream(best);
        const Slots ra = next_release_after(a, slot);
        const Slots rb = next_release_after(b, slot);
        if (ra < rb || (ra == rb && a.deadline < b.deadline)) best = k;
    }
    return best;
}

}  // namespace

Genotype dms_to_genotype(const ExecutionTrace& trace, const Scenario& scenario) {
    if (static_cast<Slots>(trace.slots.size()) != scenario.num_slots())
        throw GenotypeError("trace has " + std::to_string(trace.slots.size()) +
                            " slots, scenario horizon is " + std::to_string(scenario.num_slots()));
    if (static_cast<Slots>(trace.count(kBeacon)) != num_beacon_slots(scenario))
        throw GenotypeError("trace beacon slots do not match the scenario beacon");
    if (scenario.num_nodes() == 0) throw GenotypeError("scenario has no nodes to encode");

    std::vector<NodeIndex> genes;
    std::vector<NodeIndex> fillers;
    genes.reserve(static_cast<std::size_t>(genotype_length(scenario)));
    for (std::size_t s = 0; s < trace.slots.size(); ++s) {
        const NodeIndex v = trace.slots[s];
        if (v == kBeacon) continue;
        if (v == kIdleSlot) {
            fillers.push_back(filler_for_idle(scenario, static_cast<Slots>(s)));
        } else {
            if (v < 1 || v > scenario.num_nodes())
                throw GenotypeError("trace names node " + std::to_string(v) + " not in scenario");
            genes.push_back(v);
        }
    }
    genes.insert(genes.end(), fillers.begin(), fillers.end());
    Genotype g(std::move(genes));
    validate_genotype(g, scenario);
    return g;
}

}  // namespace superframe
