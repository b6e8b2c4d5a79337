#pragma once

namespace superframe {

/// Priority rule replayed by simulate_priority. The beacon always outranks
/// every node; ties between nodes go to the lowest node id.
struct PriorityPolicy {
    enum class Kind {
        DeadlineMonotonic,      // static: shortest relative deadline first
        EarliestDeadlineFirst,  // dynamic: earliest absolute deadline first
    };
    Kind kind = Kind::DeadlineMonotonic;

    static PriorityPolicy deadline_monotonic() { return {Kind::DeadlineMonotonic}; }
    static PriorityPolicy earliest_deadline_first() { return {Kind::EarliestDeadlineFirst}; }
};

}  // namespace superframe
