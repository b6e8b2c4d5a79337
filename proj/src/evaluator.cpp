#include "superframe/evaluator.hpp"

#include <algorithm>
#include <cassert>
#include <ostream>
#include <string>
#include <tuple>

namespace superframe {

namespace {

constexpr std::size_t kNoJob = static_cast<std::size_t>(-1);

// Per-stream live job bookkeeping over the horizon.
class JobBoard {
public:
    explicit JobBoard(const Scenario& sc)
        : sc_(sc),
          live_(static_cast<std::size_t>(sc.num_streams()), kNoJob),
          remaining_(live_.size(), 0),
          next_release_(live_.size()),
          next_index_(live_.size(), 0) {
        for (NodeIndex k = 0; k < sc.num_streams(); ++k)
            next_release_[static_cast<std::size_t>(k)] = sc.stream(k).release;
    }

    // Discards jobs whose deadline has arrived, then releases new ones.
    void advance_to(Slots slot) {
        for (NodeIndex k = 0; k < sc_.num_streams(); ++k) {
            const auto ku = static_cast<std::size_t>(k);
            expire(ku, slot);
            if (next_release_[ku] == slot) {
                const TaskSpec& t = sc_.stream(k);
                assert(live_[ku] == kNoJob);
                JobRecord rec;
                rec.node_id = k;
                rec.job_index = next_index_[ku]++;
                rec.release = slot;
                rec.deadline = slot + t.deadline;
                live_[ku] = jobs_.size();
                remaining_[ku] = t.computation;
                jobs_.push_back(rec);
                next_release_[ku] += t.period;
                expire(ku, slot);
            }
        }
    }

    bool is_live(NodeIndex k) const { return live_[static_cast<std::size_t>(k)] != kNoJob; }

    const JobRecord& live_job(NodeIndex k) const { return jobs_[live_[static_cast<std::size_t>(k)]]; }

    void run_one_slot(NodeIndex k, Slots slot) {
        const auto ku = static_cast<std::size_t>(k);
        JobRecord& rec = jobs_[live_[ku]];
        ++rec.executed;
        if (--remaining_[ku] == 0) {
            rec.completion = slot + 1;
            rec.status = JobStatus::Completed;
            live_[ku] = kNoJob;
        }
    }

    std::vector<JobRecord> finish(Slots horizon) {
        for (std::size_t ku = 0; ku < live_.size(); ++ku) {
            if (live_[ku] == kNoJob) continue;
            JobRecord& rec = jobs_[live_[ku]];
            rec.status = rec.deadline <= horizon ? JobStatus::Missed : JobStatus::Pending;
            live_[ku] = kNoJob;
        }
        return std::move(jobs_);
    }

private:
    void expire(std::size_t ku, Slots slot) {
        if (live_[ku] == kNoJob) return;
        JobRecord& rec = jobs_[live_[ku]];
        if (slot >= rec.deadline) {
            rec.status = JobStatus::Missed;
            live_[ku] = kNoJob;
        }
    }

    const Scenario& sc_;
    std::vector<std::size_t> live_;
    std::vector<Slots> remaining_;
    std::vector<Slots> next_release_;
    std::vector<int> next_index_;
    std::vector<JobRecord> jobs_;
};

// Drives the board across the horizon. `pick` is consulted only when the
// beacon has no live job and returns a node index or kIdleSlot.
template <class Pick>
ExecutionTrace run_horizon(const Scenario& sc, Pick&& pick) {
    JobBoard board(sc);
    ExecutionTrace trace;
    trace.slots.reserve(static_cast<std::size_t>(sc.num_slots()));
    for (Slots s = 0; s < sc.num_slots(); ++s) {
        board.advance_to(s);
        NodeIndex chosen = board.is_live(kBeacon) ? kBeacon : pick(board);
        if (chosen != kIdleSlot) board.run_one_slot(chosen, s);
        trace.slots.push_back(chosen);
    }
    trace.jobs = board.finish(sc.num_slots());
    return trace;
}

}  // namespace

ExecutionTrace decode_and_simulate(const Scenario& scenario, const Genotype& genotype) {
    validate_genotype(genotype, scenario);
    const auto genes = genotype.genes();
    std::size_t cursor = 0;
    return run_horizon(scenario, [&](const JobBoard& board) -> NodeIndex {
        if (cursor >= genes.size()) return kIdleSlot;
        const NodeIndex node = genes[cursor];
        if (!board.is_live(node)) return kIdleSlot;
        ++cursor;
        return node;
    });
}

ExecutionTrace simulate_priority(const Scenario& scenario, const PriorityPolicy& policy) {
    const bool dynamic = policy.kind == PriorityPolicy::Kind::EarliestDeadlineFirst;
    return run_horizon(scenario, [&](const JobBoard& board) -> NodeIndex {
        NodeIndex best = kIdleSlot;
        Slots best_key = 0;
        for (NodeIndex k = 1; k < scenario.num_streams(); ++k) {
            if (!board.is_live(k)) continue;
            const Slots key = dynamic ? board.live_job(k).deadline : scenario.stream(k).deadline;
            // strict < keeps the lowest node id on ties
            if (best == kIdleSlot || key < best_key) {
                best = k;
                best_key = key;
            }
        }
        return best;
    });
}

DefectReport defect_time(const ExecutionTrace& trace, const Scenario& scenario) {
    DefectReport r;
    r.idle_slots = static_cast<Slots>(trace.count(kIdleSlot));
    Slots late = 0;
    for (const JobRecord& job : trace.jobs) {
        switch (job.status) {
            case JobStatus::Completed:
                if (*job.completion > job.deadline) {
                    late += *job.completion - job.deadline;
                    ++r.missed_deadline_count;
                }
                break;
            case JobStatus::Missed:
                late += std::max<Slots>(0, (job.deadline - job.release) - job.executed);
                ++r.missed_deadline_count;
                break;
            case JobStatus::Pending:
                break;
        }
    }
    r.idle_time = scenario.to_ms(r.idle_slots);
    r.lateness_time = scenario.to_ms(late);
    r.defect_time = r.idle_time + r.lateness_time;
    r.fitness = fitness(r.defect_time);
    return r;
}

double fitness(Millis defect) {
    assert(defect >= 0);
    return defect == 0 ? 1.0 : 1.0 / static_cast<double>(defect);
}

DefectReport evaluate(const Scenario& scenario, const Genotype& genotype) {
    return defect_time(decode_and_simulate(scenario, genotype), scenario);
}

bool schedulability_check(const Scenario& scenario) {
    for (NodeIndex k = 0; k < scenario.num_streams(); ++k) {
        const TaskSpec& t = scenario.stream(k);
        if (t.computation > t.deadline) return false;
    }
    return true;
}

void require_schedulable(const Scenario& scenario) {
    for (NodeIndex k = 0; k < scenario.num_streams(); ++k) {
        const TaskSpec& t = scenario.stream(k);
        if (t.computation > t.deadline) {
            const std::string who = k == kBeacon ? std::string("beacon") : "N" + std::to_string(k);
            throw UnschedulableError("superframe not schedulable: " + who + " has computation " +
                                     std::to_string(scenario.to_ms(t.computation)) +
                                     " ms > deadline " + std::to_string(scenario.to_ms(t.deadline)) +
                                     " ms");
        }
    }
}

void write_trace(std::ostream& out, const ExecutionTrace& trace) {
    for (std::size_t i = 0; i < trace.slots.size(); ++i) {
        out << (i + 1) << '\t';
        const NodeIndex v = trace.slots[i];
        if (v == kBeacon) out << 'B';
        else if (v == kIdleSlot) out << '-';
        else out << 'N' << v;
        out << '\n';
    }
}

}  // namespace superframe
