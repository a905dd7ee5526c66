#pragma once

// Domain types shared by every stage of the pipeline: score grids, superpixel
// maps, the region adjacency graph, the class-pair prior and joint solutions.
// Everything is validated on construction and immutable afterwards.

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "instancecut/errors.hpp"

namespace instancecut {

using Label = int;
using NodeId = int;

/// Labels 1..L are instance classes, 0 is background.
class ClassSet {
public:
    explicit ClassSet(int num_labels);

    int num_labels() const { return num_labels_; }
    int label_count() const { return num_labels_ + 1; }
    bool contains(Label l) const { return l >= 0 && l <= num_labels_; }

    friend bool operator==(const ClassSet&, const ClassSet&) = default;

private:
    int num_labels_;
};

/// H x W x C grid of finite scores, pixel-major (C values contiguous per pixel).
class ScoreGrid {
public:
    ScoreGrid(int height, int width, int channels, std::vector<float> values);

    int height() const { return height_; }
    int width() const { return width_; }
    int channels() const { return channels_; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(height_) * width_; }

    float at(std::size_t pixel, int channel) const { return values_[pixel * channels_ + channel]; }
    float at(int row, int col, int channel) const {
        return at(static_cast<std::size_t>(row) * width_ + col, channel);
    }
    std::span<const float> values() const { return values_; }

    friend bool operator==(const ScoreGrid&, const ScoreGrid&) = default;

private:
    int height_;
    int width_;
    int channels_;
    std::vector<float> values_;
};

/// H x W map of dense region ids; every region is nonempty and 4-connected.
class SuperpixelMap {
public:
    SuperpixelMap(int height, int width, std::vector<std::int32_t> region_of);

    int height() const { return height_; }
    int width() const { return width_; }
    std::size_t pixel_count() const { return region_of_.size(); }
    int region_count() const { return region_count_; }
    std::int32_t region_of(std::size_t pixel) const { return region_of_[pixel]; }
    std::span<const std::int32_t> regions() const { return region_of_; }

    friend bool operator==(const SuperpixelMap&, const SuperpixelMap&) = default;

private:
    int height_;
    int width_;
    int region_count_ = 0;
    std::vector<std::int32_t> region_of_;
};

struct Edge {
    NodeId u;
    NodeId v;
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Incidence {
    NodeId node;
    int edge;
};

/// Connected region adjacency graph carrying unary scores alpha(u, l) and
/// boundary scores b(e). Edges are stored with u < v.
class RegionGraph {
public:
    RegionGraph(ClassSet classes, int node_count, std::vector<Edge> edges,
                std::vector<double> node_scores, std::vector<double> edge_scores);

    const ClassSet& classes() const { return classes_; }
    int node_count() const { return node_count_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    int label_count() const { return classes_.label_count(); }

    std::span<const Edge> edges() const { return edges_; }
    const Edge& edge(int e) const { return edges_[e]; }
    double alpha(NodeId u, Label l) const { return node_scores_[static_cast<std::size_t>(u) * label_count() + l]; }
    double edge_score(int e) const { return edge_scores_[e]; }
    std::span<const double> node_scores() const { return node_scores_; }
    std::span<const double> edge_scores() const { return edge_scores_; }

    std::span<const Incidence> neighbors(NodeId u) const {
        return std::span<const Incidence>(incidence_).subspan(offsets_[u], offsets_[u + 1] - offsets_[u]);
    }
    int degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }

private:
    ClassSet classes_;
    int node_count_;
    std::vector<Edge> edges_;
    std::vector<double> node_scores_;
    std::vector<double> edge_scores_;
    std::vector<int> offsets_;
    std::vector<Incidence> incidence_;
};

/// Symmetric class-pair boundary prior. The (0, 0) entry is a hard
/// constraint: two background nodes are never separated by a cut.
class PairPrior {
public:
    /// `beta` is row-major (L+1)x(L+1); the (0, 0) entry is ignored.
    PairPrior(ClassSet classes, std::vector<double> beta);

    const ClassSet& classes() const { return classes_; }
    static bool forbidden(Label a, Label b) { return a == 0 && b == 0; }
    /// Throws InfeasibleError for the forbidden pair.
    double beta(Label a, Label b) const;
    /// Unchecked access; callers must rule out the forbidden pair.
    double beta_unchecked(Label a, Label b) const { return beta_[static_cast<std::size_t>(a) * classes_.label_count() + b]; }

private:
    ClassSet classes_;
    std::vector<double> beta_;
};

struct SolverParams {
    double w = 1.0;
    double beta_small = -3.0;
    double beta_big = -3.0;
    std::vector<Label> big_classes;
    int max_rounds = 1'000'000;
    std::uint64_t seed = 0;
    /// Additional local-search restarts with seed-permuted node-move order.
    int restarts = 0;
    /// Cross-check incremental objective bookkeeping after every round.
    bool verify_incremental = false;

    void validate(const ClassSet& classes) const;
};

/// Partition of the graph into connected components, one label per component.
class JointSolution {
public:
    /// Validates every invariant against `g`; throws ValidationError for
    /// structural defects and InfeasibleError for a background-background cut.
    JointSolution(const RegionGraph& g, std::vector<int> component_of, std::vector<Label> label_of);

    int component_count() const { return static_cast<int>(label_of_.size()); }
    int component(NodeId u) const { return component_of_[u]; }
    Label component_label(int c) const { return label_of_[c]; }
    Label node_label(NodeId u) const { return label_of_[component_of_[u]]; }
    bool is_cut(const Edge& e) const { return component_of_[e.u] != component_of_[e.v]; }

    std::span<const int> component_of() const { return component_of_; }
    std::span<const Label> label_of() const { return label_of_; }

    /// Same solution with component ids renumbered by smallest member node.
    JointSolution canonical() const;

    friend bool operator==(const JointSolution&, const JointSolution&) = default;

private:
    JointSolution() = default;
    std::vector<int> component_of_;
    std::vector<Label> label_of_;
};

/// Dense component ids (ordered by smallest node) of the subgraph that keeps
/// only the edges accepted by `keep(edge_index)`.
template <class KeepEdge>
std::vector<int> connected_components(const RegionGraph& g, KeepEdge&& keep) {
    std::vector<int> comp(g.node_count(), -1);
    std::vector<NodeId> stack;
    int next = 0;
    for (NodeId s = 0; s < g.node_count(); ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            const NodeId u = stack.back();
            stack.pop_back();
            for (const Incidence& inc : g.neighbors(u)) {
                if (comp[inc.node] < 0 && keep(inc.edge)) {
                    comp[inc.node] = next;
                    stack.push_back(inc.node);
                }
            }
        }
        ++next;
    }
    return comp;
}

/// One node per region, one edge per 4-adjacent region pair. Node scores are
/// region means of `semantic`; edge scores are means of `edge_map` over the
/// pixels of either region that have a 4-neighbor in the other.
RegionGraph build_region_graph(const SuperpixelMap& spx, const ScoreGrid& semantic, const ScoreGrid& edge_map);

/// beta_big for any pair touching a big class, beta_small otherwise.
PairPrior make_pair_prior(const SolverParams& params, const ClassSet& classes);

}  // namespace instancecut
