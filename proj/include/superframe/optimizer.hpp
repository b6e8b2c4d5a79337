#pragma once

#include <vector>

#include "superframe/model.hpp"

namespace superframe {

/// One row of an optimizer's convergence history (generation or iteration).
struct HistoryPoint {
    int step = 0;
    Millis step_best_defect = 0;      // best individual/particle evaluated at this step
    Millis best_so_far_defect = 0;
    double best_so_far_fitness = 0.0;

    bool operator==(const HistoryPoint&) const = default;
};

struct OptimizerResult {
    Genotype best;
    DefectReport report;
    std::vector<HistoryPoint> history;
    long long evaluations = 0;
};

}  // namespace superframe
