#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "instancecut/objective.hpp"
#include "instancecut/solvers.hpp"

namespace instancecut {

namespace {

Label unary_argmax(const RegionGraph& g, NodeId u) {
    Label best = 0;
    for (Label l = 1; l < g.label_count(); ++l)
        if (g.alpha(u, l) > g.alpha(u, best)) best = l;
    return best;
}

// Greedy additive agglomeration on an arbitrary edge list. `rep` maps every
// node to the smallest node of its starting group; each group must be
// connected through `edges`.
std::vector<int> greedy_additive(int node_count, std::span<const Edge> edges, std::span<const double> theta,
                                 std::vector<int> rep) {
    std::vector<std::map<int, double>> adjacency(node_count);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const int a = rep[edges[e].u];
        const int b = rep[edges[e].v];
        if (a == b) continue;
        adjacency[a][b] += theta[e];
        adjacency[b][a] += theta[e];
    }
    // (accumulated score, smaller rep, larger rep)
    std::set<std::tuple<double, int, int>> queue;
    for (int a = 0; a < node_count; ++a)
        for (const auto& [b, score] : adjacency[a])
            if (a < b) queue.emplace(score, a, b);

    while (!queue.empty()) {
        const auto [score, keep, drop] = *queue.begin();
        if (score >= 0.0) break;
        queue.erase(queue.begin());
        adjacency[keep].erase(drop);
        adjacency[drop].erase(keep);
        for (const auto& [x, s] : adjacency[drop]) {
            queue.erase({s, std::min(drop, x), std::max(drop, x)});
            adjacency[x].erase(drop);
            auto it = adjacency[keep].find(x);
            if (it != adjacency[keep].end()) queue.erase({it->second, std::min(keep, x), std::max(keep, x)});
            const double merged = (adjacency[keep][x] += s);
            adjacency[x][keep] = merged;
            queue.emplace(merged, std::min(keep, x), std::max(keep, x));
        }
        adjacency[drop].clear();
        for (int& r : rep)
            if (r == drop) r = keep;
    }

    std::vector<int> dense(node_count, -1);
    std::vector<int> out(node_count);
    int next = 0;
    for (int u = 0; u < node_count; ++u) {
        if (dense[rep[u]] < 0) dense[rep[u]] = next++;
        out[u] = dense[rep[u]];
    }
    return out;
}

// Components cut exactly where labels change.
JointSolution label_segments(const RegionGraph& g, const std::vector<Label>& labeling) {
    std::vector<int> comp = connected_components(g, [&](int e) {
        return labeling[g.edge(e).u] == labeling[g.edge(e).v];
    });
    const int k = *std::max_element(comp.begin(), comp.end()) + 1;
    std::vector<Label> comp_label(k);
    for (NodeId u = 0; u < g.node_count(); ++u) comp_label[comp[u]] = labeling[u];
    return JointSolution(g, std::move(comp), std::move(comp_label));
}

SolveResult finish(const RegionGraph& g, const PairPrior& prior, const SolverParams& params, JointSolution s,
                   std::chrono::steady_clock::time_point start) {
    const double objective = joint_objective(g, prior, params, s);
    return SolveResult{std::move(s), objective, 0, 0, std::chrono::steady_clock::now() - start, {objective}};
}

}  // namespace

std::vector<Label> crf_solve(const RegionGraph& g, const PairPrior& prior, double pairwise_weight) {
    const int n = g.node_count();
    std::vector<Label> labeling(n);
    for (NodeId u = 0; u < n; ++u) labeling[u] = unary_argmax(g, u);

    auto conditional = [&](NodeId u, Label l) {
        double pairwise = 0.0;
        for (const Incidence& inc : g.neighbors(u)) {
            const Label m = labeling[inc.node];
            if (m != l) pairwise += g.edge_score(inc.edge) + prior.beta_unchecked(l, m);
        }
        return g.alpha(u, l) + pairwise_weight * pairwise;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (NodeId u = 0; u < n; ++u) {
            Label best = 0;
            double best_value = conditional(u, 0);
            for (Label l = 1; l < g.label_count(); ++l) {
                const double v = conditional(u, l);
                if (v > best_value) {
                    best = l;
                    best_value = v;
                }
            }
            // Only strict improvements move a node, which guarantees termination.
            if (best != labeling[u] && best_value > conditional(u, labeling[u])) {
                labeling[u] = best;
                changed = true;
            }
        }
    }
    return labeling;
}

std::vector<int> multicut_greedy(const RegionGraph& g, std::span<const double> theta) {
    if (theta.size() != static_cast<std::size_t>(g.edge_count()))
        throw ValidationError("multicut_greedy: theta must have one entry per edge");
    std::vector<int> singletons(g.node_count());
    std::iota(singletons.begin(), singletons.end(), 0);
    return greedy_additive(g.node_count(), g.edges(), theta, std::move(singletons));
}

SolveResult crf_baseline(const RegionGraph& g, const PairPrior& prior, const SolverParams& params) {
    const auto start = std::chrono::steady_clock::now();
    params.validate(g.classes());
    return finish(g, prior, params, label_segments(g, crf_solve(g, prior, params.w)), start);
}

SolveResult two_stage_baseline(const RegionGraph& g, const PairPrior& prior, const SolverParams& params) {
    const auto start = std::chrono::steady_clock::now();
    params.validate(g.classes());
    const std::vector<Label> labeling = crf_solve(g, prior, params.w);

    // Background segments are never split; other segments are partitioned with
    // theta = b + beta(l, l) over their internal edges.
    const std::vector<int> bg = connected_components(g, [&](int e) {
        return labeling[g.edge(e).u] == 0 && labeling[g.edge(e).v] == 0;
    });
    std::vector<int> rep(g.node_count());
    std::vector<int> first(g.node_count(), -1);
    for (NodeId u = 0; u < g.node_count(); ++u) {
        if (first[bg[u]] < 0) first[bg[u]] = u;
        rep[u] = labeling[u] == 0 ? first[bg[u]] : u;
    }
    std::vector<Edge> edges;
    std::vector<double> theta;
    for (int e = 0; e < g.edge_count(); ++e) {
        const Edge& edge = g.edge(e);
        const Label l = labeling[edge.u];
        if (l == 0 || l != labeling[edge.v]) continue;
        edges.push_back(edge);
        theta.push_back(g.edge_score(e) + prior.beta_unchecked(l, l));
    }
    std::vector<int> comp = greedy_additive(g.node_count(), edges, theta, std::move(rep));
    const int k = *std::max_element(comp.begin(), comp.end()) + 1;
    std::vector<Label> comp_label(k);
    for (NodeId u = 0; u < g.node_count(); ++u) comp_label[comp[u]] = labeling[u];
    return finish(g, prior, params, JointSolution(g, std::move(comp), std::move(comp_label)), start);
}

}  // namespace instancecut
