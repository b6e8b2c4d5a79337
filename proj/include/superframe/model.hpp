#pragma once

// Domain types for TDMA superframe scheduling.
//
// All task times are held as integer slot counts. Milliseconds only appear at
// the reporting and file boundaries, through Scenario::to_ms().

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace superframe {

using Slots = std::int64_t;
using Millis = std::int64_t;
using NodeIndex = int;

inline constexpr NodeIndex kBeacon = 0;

/// Structural problem with a scenario (bad file, bad field, broken invariant).
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A genotype does not fit the scenario it is decoded against.
class GenotypeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An optimizer was handed a scenario that violates c <= d for some stream.
class UnschedulableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One periodic message stream. Index 0 is the gateway beacon.
struct TaskSpec {
    NodeIndex node_id = 0;
    Slots release = 0;
    Slots computation = 1;
    Slots deadline = 1;  // relative to each release
    Slots period = 1;

    bool operator==(const TaskSpec&) const = default;
};

class Scenario {
public:
    Scenario() = default;

    /// Validates every structural invariant; throws ScenarioError on failure.
    /// c <= d is deliberately not checked here (see schedulability_check).
    Scenario(Millis slot_ms, Slots num_slots, TaskSpec beacon, std::vector<TaskSpec> nodes,
             std::uint64_t seed = 0);

    Millis slot_ms() const { return slot_ms_; }
    Slots num_slots() const { return num_slots_; }
    const TaskSpec& beacon() const { return beacon_; }
    std::span<const TaskSpec> nodes() const { return nodes_; }
    int num_nodes() const { return static_cast<int>(nodes_.size()); }
    std::uint64_t seed() const { return seed_; }

    /// Stream by index: 0 is the beacon, 1..n are nodes.
    const TaskSpec& stream(NodeIndex idx) const {
        return idx == kBeacon ? beacon_ : nodes_[static_cast<std::size_t>(idx - 1)];
    }
    int num_streams() const { return num_nodes() + 1; }

    Millis to_ms(Slots s) const { return s * slot_ms_; }
    Millis horizon_ms() const { return to_ms(num_slots_); }

    bool operator==(const Scenario&) const = default;

private:
    Millis slot_ms_ = 10;
    Slots num_slots_ = 0;
    TaskSpec beacon_{};
    std::vector<TaskSpec> nodes_;
    std::uint64_t seed_ = 0;
};

/// Horizon slots consumed by beacon jobs, counting a job cut by the horizon
/// end for its in-horizon part.
Slots num_beacon_slots(const Scenario& scenario);

/// Number of genes a genotype for this scenario carries.
Slots genotype_length(const Scenario& scenario);

/// Integer gene sequence assigning non-beacon slots to nodes 1..n.
class Genotype {
public:
    Genotype() = default;
    explicit Genotype(std::vector<NodeIndex> genes) : genes_(std::move(genes)) {}

    std::span<const NodeIndex> genes() const { return genes_; }
    std::vector<NodeIndex>& mutable_genes() { return genes_; }
    std::size_t size() const { return genes_.size(); }
    NodeIndex operator[](std::size_t i) const { return genes_[i]; }

    bool operator==(const Genotype&) const = default;

private:
    std::vector<NodeIndex> genes_;
};

/// True when length and gene range both fit the scenario.
bool is_valid_genotype(const Genotype& g, const Scenario& scenario);

/// Throws GenotypeError with a message naming the first violation.
void validate_genotype(const Genotype& g, const Scenario& scenario);

/// Outcome of one slot: kBeacon, a node index, or kIdleSlot.
inline constexpr NodeIndex kIdleSlot = -1;

enum class JobStatus {
    Completed,  // finished; may still be late (only possible when c > d is not enforced)
    Missed,     // unfinished when its absolute deadline passed; discarded
    Pending,    // unfinished at horizon end, deadline beyond the horizon
};

struct JobRecord {
    NodeIndex node_id = 0;
    int job_index = 0;
    Slots release = 0;           // absolute
    Slots deadline = 0;          // absolute
    Slots executed = 0;          // slots of service received
    std::optional<Slots> completion;  // absolute end of the final slot
    JobStatus status = JobStatus::Pending;

    bool operator==(const JobRecord&) const = default;
};

struct ExecutionTrace {
    std::vector<NodeIndex> slots;  // one entry per horizon slot
    std::vector<JobRecord> jobs;   // every job released within the horizon

    std::size_t count(NodeIndex what) const;
    bool operator==(const ExecutionTrace&) const = default;
};

struct DefectReport {
    Slots idle_slots = 0;
    Millis idle_time = 0;
    Millis lateness_time = 0;
    int missed_deadline_count = 0;
    Millis defect_time = 0;
    double fitness = 1.0;

    bool operator==(const DefectReport&) const = default;
};

}  // namespace superframe
