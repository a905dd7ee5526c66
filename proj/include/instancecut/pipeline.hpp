#pragma once

#include <functional>
#include <string>
#include <vector>

#include "instancecut/evaluate.hpp"
#include "instancecut/model.hpp"
#include "instancecut/objective.hpp"
#include "instancecut/pixel.hpp"
#include "instancecut/solvers.hpp"

namespace instancecut {

struct PipelineConfig {
    int quantization_levels = kDefaultQuantizationLevels;
    SolverParams params;
    SolverKind solver = SolverKind::local;
};

struct PipelineResult {
    SuperpixelMap superpixels;
    RegionGraph graph;
    PairPrior prior;
    SolveResult result;
    InstanceMap instances;
};

/// watershed -> build_region_graph -> solve -> extract_instances.
PipelineResult run_pipeline(const ScoreGrid& semantic, const ScoreGrid& edge_map, const PipelineConfig& config);

/// A scene with its (parameter-independent) superpixels and graph precomputed.
struct PreparedScene {
    SuperpixelMap superpixels;
    RegionGraph graph;
    InstanceMap gt;
};

PreparedScene prepare_scene(const ScoreGrid& semantic, const ScoreGrid& edge_map, InstanceMap gt,
                            int quantization_levels = kDefaultQuantizationLevels);

struct GridSearchConfig {
    std::vector<double> w_values;
    std::vector<double> beta_small_values;
    std::vector<double> beta_big_values;
    /// big_classes, max_rounds, seed and restarts are taken from here.
    SolverParams base;
    SolverKind solver = SolverKind::local;
    int folds = 2;
};

struct GridEvaluation {
    double w;
    double beta_small;
    double beta_big;
    int fold;
    double mean_f1;
};

struct GridSearchResult {
    SolverParams best;
    double best_score = 0.0;
    /// One entry per (grid point, fold) solver invocation, in evaluation order.
    std::vector<GridEvaluation> evaluations;
};

/// Exhaustive grid with k-fold cross-validation; scene i belongs to fold
/// i mod k. A grid point scores the mean over folds of the fold-mean F1.
/// Ties go to the lexicographically smallest (w, beta_small, beta_big).
GridSearchResult grid_search(const std::vector<PreparedScene>& scenes, const GridSearchConfig& config,
                             const std::function<void(const GridEvaluation&)>& log = {});

}  // namespace instancecut
