#pragma once

#include <chrono>
#include <span>
#include <string_view>
#include <vector>

#include "instancecut/model.hpp"

namespace instancecut {

struct SolveResult {
    JointSolution solution;
    /// joint_objective(solution), recomputed after solving.
    double objective = 0.0;
    int rounds = 0;
    int moves_applied = 0;
    std::chrono::duration<double> wall_time{};
    /// Objective after initialization followed by the value after each applied move.
    std::vector<double> objective_trace;
};

/// Exhaustive maximization over connected partitions and component labelings.
/// Ties resolve to the lexicographically smallest (component_of, label_of).
/// Limited to |V| <= 9 and L <= 3; larger inputs throw SolverError.
SolveResult oracle_exact(const RegionGraph& g, const PairPrior& prior, const SolverParams& params);

inline constexpr int kOracleMaxNodes = 9;
inline constexpr int kOracleMaxLabels = 3;

/// Iterated conditional modes on the CRF. Starts at the unary argmax and sweeps
/// nodes in id order until a sweep changes nothing.
std::vector<Label> crf_solve(const RegionGraph& g, const PairPrior& prior, double pairwise_weight = 1.0);

/// Greedy additive agglomeration for the single-label multicut with edge
/// weights `theta`. Returns component ids ordered by smallest node.
std::vector<int> multicut_greedy(const RegionGraph& g, std::span<const double> theta);

/// Best-improvement local search over joint solutions, initialized from ICM.
SolveResult joint_local_search(const RegionGraph& g, const PairPrior& prior, const SolverParams& params);

/// ICM labeling with components cut exactly at label changes.
SolveResult crf_baseline(const RegionGraph& g, const PairPrior& prior, const SolverParams& params);

/// ICM labeling followed by greedy multicut inside every labeled segment.
SolveResult two_stage_baseline(const RegionGraph& g, const PairPrior& prior, const SolverParams& params);

enum class SolverKind { local, oracle, crf, greedy };

SolverKind parse_solver_kind(std::string_view name);
std::string_view to_string(SolverKind kind);

SolveResult solve(const RegionGraph& g, const PairPrior& prior, const SolverParams& params, SolverKind kind);

}  // namespace instancecut
