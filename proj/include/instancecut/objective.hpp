#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "instancecut/model.hpp"

namespace instancecut {

/// Possibly infeasible binary assignment: x is node-major |V| x (L+1),
/// y has one entry per edge (1 = cut).
struct RawAssignment {
    std::vector<std::uint8_t> x;
    std::vector<std::uint8_t> y;

    std::uint8_t x_at(const RegionGraph& g, NodeId u, Label l) const {
        return x[static_cast<std::size_t>(u) * g.label_count() + l];
    }
};

struct FeasibilityReport {
    bool uniqueness_ok = true;
    bool cycle_ok = true;
    bool coupling_ok = true;
    bool background_ok = true;

    std::optional<NodeId> uniqueness_witness;
    /// Edge indices of a cycle that contains exactly one cut edge (listed first).
    std::vector<int> cycle_witness;
    std::optional<int> coupling_witness;
    std::optional<int> background_witness;

    bool feasible() const { return uniqueness_ok && cycle_ok && coupling_ok && background_ok; }
};

/// Thrown by multicut_objective for a cut vector that is not a multicut.
class CycleViolation : public InfeasibleError {
public:
    CycleViolation(const char* what, std::vector<int> cycle) : InfeasibleError(what), cycle_(std::move(cycle)) {}
    const std::vector<int>& cycle() const { return cycle_; }

private:
    std::vector<int> cycle_;
};

/// Sum of unaries plus w * (b + beta) over every cut edge.
/// Throws InfeasibleError if a cut edge joins two background components.
double joint_objective(const RegionGraph& g, const PairPrior& prior, const SolverParams& params, const JointSolution& s);
double joint_objective(const RegionGraph& g, const PairPrior& prior, double w, const JointSolution& s);

/// x and y implied by a joint solution.
RawAssignment to_assignment(const RegionGraph& g, const JointSolution& s);

FeasibilityReport check_feasibility(const RegionGraph& g, const RawAssignment& a);

/// Unary plus pairwise CRF score; pairwise terms apply only across differing labels.
double crf_objective(const RegionGraph& g, const PairPrior& prior, std::span<const Label> labeling,
                     double pairwise_weight = 1.0);

/// theta(e) = b(e) + beta(l, l) for every edge, the single-label multicut weights.
std::vector<double> multicut_weights(const RegionGraph& g, const PairPrior& prior, Label l);

/// Sum of theta over cut edges. Throws CycleViolation when y is not a multicut.
double multicut_objective(const RegionGraph& g, std::span<const double> theta, std::span<const std::uint8_t> y);

/// Per-pixel (instance id, class). Background components collapse to (0, 0);
/// other components get ids 1..k ordered by their first pixel in raster order.
struct InstanceMap {
    int height = 0;
    int width = 0;
    std::vector<std::uint32_t> instance;
    std::vector<std::uint8_t> label;

    int instance_count() const;
    friend bool operator==(const InstanceMap&, const InstanceMap&) = default;
};

InstanceMap extract_instances(const SuperpixelMap& spx, const JointSolution& s);

}  // namespace instancecut
