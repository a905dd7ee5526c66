#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

#include "instancecut/objective.hpp"
#include "instancecut/solvers.hpp"

namespace instancecut {

namespace {

struct CutEdge {
    int block_u;
    int block_v;
    double b;
};

// Advances a restricted growth string to its lexicographic successor.
bool next_partition(std::vector<int>& rgs) {
    const int n = static_cast<int>(rgs.size());
    std::vector<int> prefix_max(n, 0);
    for (int i = 1; i < n; ++i) prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
    for (int i = n - 1; i >= 1; --i) {
        if (rgs[i] <= prefix_max[i - 1]) {
            ++rgs[i];
            std::fill(rgs.begin() + i + 1, rgs.end(), 0);
            return true;
        }
    }
    return false;
}

bool blocks_connected(const RegionGraph& g, const std::vector<int>& rgs, int blocks) {
    const std::vector<int> pieces = connected_components(g, [&](int e) {
        return rgs[g.edge(e).u] == rgs[g.edge(e).v];
    });
    return *std::max_element(pieces.begin(), pieces.end()) + 1 == blocks;
}

}  // namespace

SolveResult oracle_exact(const RegionGraph& g, const PairPrior& prior, const SolverParams& params) {
    const auto start = std::chrono::steady_clock::now();
    params.validate(g.classes());
    if (g.node_count() > kOracleMaxNodes || g.classes().num_labels() > kOracleMaxLabels)
        throw SolverError("oracle_exact: instance too large (|V| <= " + std::to_string(kOracleMaxNodes) +
                          ", L <= " + std::to_string(kOracleMaxLabels) + ")");

    const int n = g.node_count();
    const int labels = g.label_count();
    const double w = params.w;

    std::vector<int> rgs(n, 0);
    std::optional<double> best;
    std::vector<int> best_partition;
    std::vector<Label> best_labels;

    std::vector<double> block_alpha;
    std::vector<CutEdge> cut;
    std::vector<Label> lab;
    do {
        const int blocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
        if (!blocks_connected(g, rgs, blocks)) continue;

        block_alpha.assign(static_cast<std::size_t>(blocks) * labels, 0.0);
        for (NodeId u = 0; u < n; ++u)
            for (Label l = 0; l < labels; ++l) block_alpha[static_cast<std::size_t>(rgs[u]) * labels + l] += g.alpha(u, l);
        cut.clear();
        for (int e = 0; e < g.edge_count(); ++e) {
            const Edge& edge = g.edge(e);
            if (rgs[edge.u] != rgs[edge.v]) cut.push_back({rgs[edge.u], rgs[edge.v], g.edge_score(e)});
        }

        lab.assign(blocks, 0);
        while (true) {
            bool feasible = true;
            double pairwise = 0.0;
            for (const CutEdge& c : cut) {
                const Label a = lab[c.block_u];
                const Label b = lab[c.block_v];
                if (PairPrior::forbidden(a, b)) {
                    feasible = false;
                    break;
                }
                pairwise += c.b + prior.beta_unchecked(a, b);
            }
            if (feasible) {
                double unary = 0.0;
                for (int k = 0; k < blocks; ++k) unary += block_alpha[static_cast<std::size_t>(k) * labels + lab[k]];
                const double value = unary + w * pairwise;
                // Enumeration is lexicographic, so only a strict improvement
                // (beyond summation-order noise) may replace the incumbent.
                if (!best || value > *best + 1e-12 * std::max(1.0, std::abs(*best))) {
                    best = value;
                    best_partition = rgs;
                    best_labels = lab;
                }
            }
            int k = blocks - 1;
            while (k >= 0 && lab[k] == labels - 1) lab[k--] = 0;
            if (k < 0) break;
            ++lab[k];
        }
    } while (next_partition(rgs));

    if (!best) throw SolverError("oracle_exact: no feasible solution");
    JointSolution solution(g, std::move(best_partition), std::move(best_labels));
    const double objective = joint_objective(g, prior, params, solution);
    return SolveResult{std::move(solution), objective, 0, 0, std::chrono::steady_clock::now() - start, {objective}};
}

}  // namespace instancecut
