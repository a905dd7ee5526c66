#pragma once

#include <map>
#include <vector>

#include "instancecut/objective.hpp"

namespace instancecut {

inline constexpr double kMatchIoU = 0.5;

struct ClassMatch {
    int predicted = 0;
    int ground_truth = 0;
    int matched = 0;
    double precision = 1.0;
    double recall = 1.0;
};

/// Instance-level matching summary. Empty prediction (or ground-truth) sets
/// count as precision (or recall) 1: there is nothing to be wrong about.
struct MatchReport {
    int predicted = 0;
    int ground_truth = 0;
    int matched = 0;
    double precision = 1.0;
    double recall = 1.0;
    double f1 = 1.0;
    /// Every instance on both sides matched one-to-one.
    bool exact_match = true;
    std::map<int, ClassMatch> per_class;
    /// Best IoU reached by each ground-truth instance against any prediction,
    /// ordered by ground-truth instance id.
    std::vector<double> best_iou;
};

/// Greedy one-to-one matching by descending IoU; a pair matches when
/// IoU >= 0.5 and the classes agree. Instance id 0 is background.
MatchReport evaluate(const InstanceMap& pred, const InstanceMap& gt);

}  // namespace instancecut
