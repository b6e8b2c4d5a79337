#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "superframe/model.hpp"

namespace superframe {

/// Draw ranges for random_scenario, in milliseconds. Each value is drawn as a
/// whole number of slots inside the range.
struct RandomRanges {
    static constexpr Millis release_max = 100;
    static constexpr Millis computation_min = 10;
    static constexpr Millis computation_max = 30;
    static constexpr Millis deadline_max = 100;
    static constexpr Millis period_max = 250;
};

inline constexpr Millis kDefaultSlotMs = 10;

/// Beacon (0, 10, 10, 250) ms and four nodes, 10 ms slots.
Scenario table1_scenario(Slots num_slots);

/// Reference-set beacon plus `n_nodes` nodes with seeded random parameters.
/// Every node satisfies c <= d <= t.
Scenario random_scenario(int n_nodes, Slots num_slots, std::uint64_t seed);

/// Parse the text scenario format. Non-fatal findings (currently only a
/// c > d stream) are appended to `warnings` when given.
Scenario parse_scenario(std::string_view text, std::vector<std::string>* warnings = nullptr);

/// Canonical text form; parse_scenario(format_scenario(s)) == s.
std::string format_scenario(const Scenario& scenario);

Scenario load_scenario(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

}  // namespace superframe
