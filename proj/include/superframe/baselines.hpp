#pragma once

#include "superframe/evaluator.hpp"
#include "superframe/model.hpp"
#include "superframe/policy.hpp"

namespace superframe {

/// Deadline monotonic: static priority by shortest relative deadline.
ExecutionTrace dms_schedule(const Scenario& scenario);

/// Earliest deadline first among live jobs.
ExecutionTrace edf_schedule(const Scenario& scenario);

/// Turn a priority-driven trace into a genotype that replays it.
///
/// Genes are the nodes executed in non-beacon slots, in slot order. Each idle
/// slot adds one filler gene (the node released soonest after that slot) at
/// the tail, past the point the replay ever reaches, so decoding reproduces
/// the source trace slot for slot.
///
/// Throws GenotypeError when the trace does not belong to the scenario.
Genotype dms_to_genotype(const ExecutionTrace& trace, const Scenario& scenario);

}  // namespace superframe
