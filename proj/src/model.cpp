#include "superframe/model.hpp"

#include <algorithm>
#include <string>

namespace superframe {

namespace {

void check_task(const TaskSpec& t, const std::string& label) {
    if (t.release < 0 || t.deadline < 0)
        throw ScenarioError(label + ": negative time field");
    if (t.computation < 1)
        throw ScenarioError(label + ": computation must be at least one slot");
    if (t.period < 1)
        throw ScenarioError(label + ": period must be at least one slot");
    if (t.deadline > t.period)
        throw ScenarioError(label + ": deadline exceeds period");
}

}  // namespace

Scenario::Scenario(Millis slot_ms, Slots num_slots, TaskSpec beacon, std::vector<TaskSpec> nodes,
                   std::uint64_t seed)
    : slot_ms_(slot_ms), num_slots_(num_slots), beacon_(beacon), nodes_(std::move(nodes)), seed_(seed) {
    if (slot_ms_ <= 0) throw ScenarioError("slot duration must be positive");
    if (num_slots_ <= 0) throw ScenarioError("horizon must contain at least one slot");
    if (beacon_.node_id != kBeacon) throw ScenarioError("beacon must have node id 0");
    if (beacon_.release != 0) throw ScenarioError("beacon release must be 0");
    check_task(beacon_, "beacon");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto expected = static_cast<NodeIndex>(i + 1);
        if (nodes_[i].node_id != expected)
            throw ScenarioError("node ids must be 1..n in order; got N" +
                                std::to_string(nodes_[i].node_id) + " at position " +
                                std::to_string(expected));
        check_task(nodes_[i], "N" + std::to_string(expected));
    }
    if (num_slots_ < beacon_.period)
        throw ScenarioError("horizon shorter than one beacon period");
}

Slots num_beacon_slots(const Scenario& scenario) {
    const auto& b = scenario.beacon();
    Slots total = 0;
    for (Slots rel = b.release; rel < scenario.num_slots(); rel += b.period)
        total += std::min(b.computation, scenario.num_slots() - rel);
    return total;
}

Slots genotype_length(const Scenario& scenario) {
    return scenario.num_slots() - num_beacon_slots(scenario);
}

bool is_valid_genotype(const Genotype& g, const Scenario& scenario) {
    if (static_cast<Slots>(g.size()) != genotype_length(scenario)) return false;
    const int n = scenario.num_nodes();
    return std::all_of(g.genes().begin(), g.genes().end(),
                       [n](NodeIndex v) { return v >= 1 && v <= n; });
}

void validate_genotype(const Genotype& g, const Scenario& scenario) {
    const Slots want = genotype_length(scenario);
    if (static_cast<Slots>(g.size()) != want)
        throw GenotypeError("genotype length " + std::to_string(g.size()) + " != " +
                            std::to_string(want) + " non-beacon slots");
    const int n = scenario.num_nodes();
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] < 1 || g[i] > n)
            throw GenotypeError("gene " + std::to_string(i) + " = " + std::to_string(g[i]) +
                                " outside [1, " + std::to_string(n) + "]");
    }
}

std::size_t ExecutionTrace::count(NodeIndex what) const {
    return static_cast<std::size_t>(std::count(slots.begin(), slots.end(), what));
}

}  // namespace superframe
