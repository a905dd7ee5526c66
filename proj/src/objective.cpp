#include "instancecut/objective.hpp"

#include <algorithm>
#include <queue>
#include <set>

namespace instancecut {

namespace {

void check_dimensions(const RegionGraph& g, const RawAssignment& a) {
    if (a.x.size() != static_cast<std::size_t>(g.node_count()) * g.label_count())
        throw ValidationError("assignment: x must be |V| x (L+1)");
    if (a.y.size() != static_cast<std::size_t>(g.edge_count())) throw ValidationError("assignment: y must be |E|");
    auto binary = [](std::uint8_t v) { return v <= 1; };
    if (!std::all_of(a.x.begin(), a.x.end(), binary) || !std::all_of(a.y.begin(), a.y.end(), binary))
        throw ValidationError("assignment: entries must be 0 or 1");
}

// Edge indices on a path from `from` to `to` using only uncut edges.
std::vector<int> uncut_path(const RegionGraph& g, std::span<const std::uint8_t> y, NodeId from, NodeId to) {
    std::vector<int> via(g.node_count(), -1);
    std::vector<char> seen(g.node_count(), 0);
    std::queue<NodeId> queue;
    queue.push(from);
    seen[from] = 1;
    while (!queue.empty()) {
        const NodeId u = queue.front();
        queue.pop();
        if (u == to) break;
        for (const Incidence& inc : g.neighbors(u)) {
            if (y[inc.edge] || seen[inc.node]) continue;
            seen[inc.node] = 1;
            via[inc.node] = inc.edge;
            queue.push(inc.node);
        }
    }
    std::vector<int> path;
    for (NodeId u = to; u != from;) {
        const int e = via[u];
        path.push_back(e);
        u = g.edge(e).u == u ? g.edge(e).v : g.edge(e).u;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

// First cut edge whose endpoints are joined by uncut edges, as a cycle witness.
std::vector<int> find_cycle_violation(const RegionGraph& g, std::span<const std::uint8_t> y) {
    const std::vector<int> comp = connected_components(g, [&](int e) { return y[e] == 0; });
    for (int e = 0; e < g.edge_count(); ++e) {
        if (y[e] && comp[g.edge(e).u] == comp[g.edge(e).v]) {
            std::vector<int> cycle{e};
            const std::vector<int> path = uncut_path(g, y, g.edge(e).u, g.edge(e).v);
            cycle.insert(cycle.end(), path.begin(), path.end());
            return cycle;
        }
    }
    return {};
}

}  // namespace

double joint_objective(const RegionGraph& g, const PairPrior& prior, double w, const JointSolution& s) {
    if (s.component_of().size() != static_cast<std::size_t>(g.node_count()))
        throw ValidationError("joint_objective: solution does not match graph");
    double unary = 0.0;
    for (NodeId u = 0; u < g.node_count(); ++u) unary += g.alpha(u, s.node_label(u));
    double pairwise = 0.0;
    for (int e = 0; e < g.edge_count(); ++e) {
        const Edge& edge = g.edge(e);
        if (!s.is_cut(edge)) continue;
        pairwise += g.edge_score(e) + prior.beta(s.node_label(edge.u), s.node_label(edge.v));
    }
    return unary + w * pairwise;
}

double joint_objective(const RegionGraph& g, const PairPrior& prior, const SolverParams& params, const JointSolution& s) {
    return joint_objective(g, prior, params.w, s);
}

RawAssignment to_assignment(const RegionGraph& g, const JointSolution& s) {
    RawAssignment a;
    a.x.assign(static_cast<std::size_t>(g.node_count()) * g.label_count(), 0);
    a.y.assign(g.edge_count(), 0);
    for (NodeId u = 0; u < g.node_count(); ++u) a.x[static_cast<std::size_t>(u) * g.label_count() + s.node_label(u)] = 1;
    for (int e = 0; e < g.edge_count(); ++e) a.y[e] = s.is_cut(g.edge(e)) ? 1 : 0;
    return a;
}

FeasibilityReport check_feasibility(const RegionGraph& g, const RawAssignment& a) {
    check_dimensions(g, a);
    FeasibilityReport report;
    const int labels = g.label_count();

    for (NodeId u = 0; u < g.node_count() && report.uniqueness_ok; ++u) {
        int sum = 0;
        for (Label l = 0; l < labels; ++l) sum += a.x_at(g, u, l);
        if (sum != 1) {
            report.uniqueness_ok = false;
            report.uniqueness_witness = u;
        }
    }

    for (int e = 0; e < g.edge_count() && report.coupling_ok; ++e) {
        const Edge& edge = g.edge(e);
        for (Label l = 0; l < labels; ++l) {
            if (std::abs(a.x_at(g, edge.u, l) - a.x_at(g, edge.v, l)) > a.y[e]) {
                report.coupling_ok = false;
                report.coupling_witness = e;
                break;
            }
        }
    }

    report.cycle_witness = find_cycle_violation(g, a.y);
    report.cycle_ok = report.cycle_witness.empty();

    for (int e = 0; e < g.edge_count(); ++e) {
        const Edge& edge = g.edge(e);
        if (a.y[e] && a.x_at(g, edge.u, 0) && a.x_at(g, edge.v, 0)) {
            report.background_ok = false;
            report.background_witness = e;
            break;
        }
    }
    return report;
}

double crf_objective(const RegionGraph& g, const PairPrior& prior, std::span<const Label> labeling, double pairwise_weight) {
    if (labeling.size() != static_cast<std::size_t>(g.node_count()))
        throw ValidationError("crf_objective: labeling must cover every node");
    double unary = 0.0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        if (!g.classes().contains(labeling[u])) throw ValidationError("crf_objective: label out of range");
        unary += g.alpha(u, labeling[u]);
    }
    double pairwise = 0.0;
    for (int e = 0; e < g.edge_count(); ++e) {
        const Label a = labeling[g.edge(e).u];
        const Label b = labeling[g.edge(e).v];
        if (a != b) pairwise += g.edge_score(e) + prior.beta(a, b);
    }
    return unary + pairwise_weight * pairwise;
}

std::vector<double> multicut_weights(const RegionGraph& g, const PairPrior& prior, Label l) {
    const double beta = prior.beta(l, l);
    std::vector<double> theta(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) theta[e] = g.edge_score(e) + beta;
    return theta;
}

double multicut_objective(const RegionGraph& g, std::span<const double> theta, std::span<const std::uint8_t> y) {
    if (theta.size() != static_cast<std::size_t>(g.edge_count()) || y.size() != theta.size())
        throw ValidationError("multicut_objective: theta and y must have one entry per edge");
    std::vector<int> cycle = find_cycle_violation(g, y);
    if (!cycle.empty()) throw CycleViolation("multicut_objective: y violates a cycle constraint", std::move(cycle));
    double total = 0.0;
    for (int e = 0; e < g.edge_count(); ++e)
        if (y[e]) total += theta[e];
    return total;
}

int InstanceMap::instance_count() const {
    std::set<std::uint32_t> ids(instance.begin(), instance.end());
    ids.erase(0);
    return static_cast<int>(ids.size());
}

InstanceMap extract_instances(const SuperpixelMap& spx, const JointSolution& s) {
    if (s.component_of().size() != static_cast<std::size_t>(spx.region_count()))
        throw ValidationError("extract_instances: solution does not match superpixel map");
    for (const Label l : s.label_of())
        if (l > 255) throw ValidationError("extract_instances: labels above 255 do not fit an instance map");
    InstanceMap out;
    out.height = spx.height();
    out.width = spx.width();
    out.instance.resize(spx.pixel_count());
    out.label.resize(spx.pixel_count());
    std::vector<std::uint32_t> id_of(s.component_count(), 0);
    std::vector<char> assigned(s.component_count(), 0);
    std::uint32_t next = 1;
    for (std::size_t p = 0; p < spx.pixel_count(); ++p) {
        const int c = s.component(spx.region_of(p));
        const Label l = s.component_label(c);
        if (l != 0 && !assigned[c]) {
            assigned[c] = 1;
            id_of[c] = next++;
        }
        out.instance[p] = id_of[c];
        out.label[p] = static_cast<std::uint8_t>(l);
    }
    return out;
}

}  // namespace instancecut
