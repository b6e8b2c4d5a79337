#pragma once

// Slot-by-slot execution model and defect-time scoring.
//
// Job model, shared by every scheduler:
//   * stream k releases a job at release_k + j * period_k for j = 0, 1, ...
//   * a job unfinished when its absolute deadline arrives is discarded and
//     recorded as Missed; with deadline <= period a stream never has more
//     than one live job
//   * one slot of execution removes one slot of remaining computation
//   * the beacon's live job always takes the slot
//
// Defect time is idle time plus lateness. A Missed job is charged the part
// of its deadline window in which it received no service,
// (deadline - release) - executed, in milliseconds.

#include <iosfwd>

#include "superframe/model.hpp"
#include "superframe/policy.hpp"

namespace superframe {

/// Replay a genotype: the gene cursor only advances when its node runs; a
/// gene whose node has no live job leaves the slot idle.
ExecutionTrace decode_and_simulate(const Scenario& scenario, const Genotype& genotype);

/// Replay a priority rule: every slot runs the highest-priority live job.
ExecutionTrace simulate_priority(const Scenario& scenario, const PriorityPolicy& policy);

DefectReport defect_time(const ExecutionTrace& trace, const Scenario& scenario);

double fitness(Millis defect_time);
inline double fitness(const DefectReport& report) { return fitness(report.defect_time); }

/// decode_and_simulate followed by defect_time.
DefectReport evaluate(const Scenario& scenario, const Genotype& genotype);

/// True iff computation <= deadline for the beacon and every node.
bool schedulability_check(const Scenario& scenario);

/// Throws UnschedulableError naming the first stream with c > d.
void require_schedulable(const Scenario& scenario);

/// One line per slot: "<1-based slot>\t<B|N<k>|->".
void write_trace(std::ostream& out, const ExecutionTrace& trace);

}  // namespace superframe
