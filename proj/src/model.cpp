#include "instancecut/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace instancecut {

namespace {

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

ClassSet::ClassSet(int num_labels) : num_labels_(num_labels) {
    if (num_labels < 1) throw ValidationError("ClassSet: num_labels must be >= 1");
}

ScoreGrid::ScoreGrid(int height, int width, int channels, std::vector<float> values)
    : height_(height), width_(width), channels_(channels), values_(std::move(values)) {
    if (height <= 0 || width <= 0 || channels <= 0)
        throw ValidationError("ScoreGrid: dimensions must be positive");
    if (values_.size() != static_cast<std::size_t>(height) * width * channels)
        throw ValidationError("ScoreGrid: value count does not match H*W*C");
    for (float v : values_)
        if (!std::isfinite(v)) throw ValidationError("ScoreGrid: non-finite value");
}

SuperpixelMap::SuperpixelMap(int height, int width, std::vector<std::int32_t> region_of)
    : height_(height), width_(width), region_of_(std::move(region_of)) {
    if (height <= 0 || width <= 0) throw ValidationError("SuperpixelMap: dimensions must be positive");
    const std::size_t n = static_cast<std::size_t>(height) * width;
    if (region_of_.size() != n) throw ValidationError("SuperpixelMap: size does not match H*W");

    std::int32_t max_id = -1;
    for (std::int32_t r : region_of_) {
        if (r < 0) throw ValidationError("SuperpixelMap: negative region id");
        max_id = std::max(max_id, r);
    }
    region_count_ = max_id + 1;

    // Flood each region from its first pixel; a second seed for the same id
    // means the region is not 4-connected, an unseen id means ids are sparse.
    std::vector<char> seen_region(region_count_, 0);
    std::vector<char> visited(n, 0);
    std::vector<std::size_t> stack;
    for (std::size_t p = 0; p < n; ++p) {
        if (visited[p]) continue;
        const std::int32_t r = region_of_[p];
        if (seen_region[r]) throw ValidationError("SuperpixelMap: region " + std::to_string(r) + " is not 4-connected");
        seen_region[r] = 1;
        visited[p] = 1;
        stack.push_back(p);
        while (!stack.empty()) {
            const std::size_t q = stack.back();
            stack.pop_back();
            const int row = static_cast<int>(q / width);
            const int col = static_cast<int>(q % width);
            auto visit = [&](std::size_t nb) {
                if (!visited[nb] && region_of_[nb] == r) {
                    visited[nb] = 1;
                    stack.push_back(nb);
                }
            };
            if (row > 0) visit(q - width);
            if (row + 1 < height) visit(q + width);
            if (col > 0) visit(q - 1);
            if (col + 1 < width) visit(q + 1);
        }
    }
    if (std::find(seen_region.begin(), seen_region.end(), 0) != seen_region.end())
        throw ValidationError("SuperpixelMap: region ids are not dense");
}

RegionGraph::RegionGraph(ClassSet classes, int node_count, std::vector<Edge> edges,
                         std::vector<double> node_scores, std::vector<double> edge_scores)
    : classes_(classes),
      node_count_(node_count),
      edges_(std::move(edges)),
      node_scores_(std::move(node_scores)),
      edge_scores_(std::move(edge_scores)) {
    if (node_count < 1) throw ValidationError("RegionGraph: node_count must be >= 1");
    if (node_scores_.size() != static_cast<std::size_t>(node_count) * classes_.label_count())
        throw ValidationError("RegionGraph: node_scores must have node_count*(L+1) entries");
    if (edge_scores_.size() != edges_.size())
        throw ValidationError("RegionGraph: edge_scores must have one entry per edge");
    if (!all_finite(node_scores_) || !all_finite(edge_scores_))
        throw ValidationError("RegionGraph: non-finite score");

    for (Edge& e : edges_) {
        if (e.u < 0 || e.v < 0 || e.u >= node_count || e.v >= node_count)
            throw ValidationError("RegionGraph: edge endpoint out of range");
        if (e.u == e.v) throw ValidationError("RegionGraph: self-loop");
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::vector<Edge> sorted = edges_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ValidationError("RegionGraph: duplicate edge");

    offsets_.assign(node_count + 1, 0);
    for (const Edge& e : edges_) {
        ++offsets_[e.u + 1];
        ++offsets_[e.v + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    incidence_.resize(2 * edges_.size());
    std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
        incidence_[fill[edges_[e].u]++] = {edges_[e].v, e};
        incidence_[fill[edges_[e].v]++] = {edges_[e].u, e};
    }

    const std::vector<int> comp = connected_components(*this, [](int) { return true; });
    if (std::any_of(comp.begin(), comp.end(), [](int c) { return c != 0; }))
        throw ValidationError("RegionGraph: graph is not connected");
}

PairPrior::PairPrior(ClassSet classes, std::vector<double> beta) : classes_(classes), beta_(std::move(beta)) {
    const int n = classes_.label_count();
    if (beta_.size() != static_cast<std::size_t>(n) * n)
        throw ValidationError("PairPrior: matrix must be (L+1)x(L+1)");
    beta_[0] = 0.0;  // forbidden entry, never read
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const double x = beta_[static_cast<std::size_t>(a) * n + b];
            if (!std::isfinite(x)) throw ValidationError("PairPrior: non-finite entry");
            if (x != beta_[static_cast<std::size_t>(b) * n + a]) throw ValidationError("PairPrior: matrix not symmetric");
        }
    }
}

double PairPrior::beta(Label a, Label b) const {
    if (!classes_.contains(a) || !classes_.contains(b)) throw ValidationError("PairPrior: label out of range");
    if (forbidden(a, b)) throw InfeasibleError("PairPrior: background-background boundary is forbidden");
    return beta_unchecked(a, b);
}

void SolverParams::validate(const ClassSet& classes) const {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("SolverParams: w must be finite and >= 0");
    if (!std::isfinite(beta_small) || !std::isfinite(beta_big))
        throw ValidationError("SolverParams: beta values must be finite");
    for (Label l : big_classes)
        if (l < 1 || l > classes.num_labels()) throw ValidationError("SolverParams: big class outside 1..L");
    if (max_rounds < 0) throw ValidationError("SolverParams: max_rounds must be >= 0");
    if (restarts < 0) throw ValidationError("SolverParams: restarts must be >= 0");
}

JointSolution::JointSolution(const RegionGraph& g, std::vector<int> component_of, std::vector<Label> label_of)
    : component_of_(std::move(component_of)), label_of_(std::move(label_of)) {
    if (component_of_.size() != static_cast<std::size_t>(g.node_count()))
        throw ValidationError("JointSolution: component_of must have one entry per node");
    const int k = static_cast<int>(label_of_.size());
    std::vector<char> used(k, 0);
    for (int c : component_of_) {
        if (c < 0 || c >= k) throw ValidationError("JointSolution: component id out of range");
        used[c] = 1;
    }
    if (std::find(used.begin(), used.end(), 0) != used.end())
        throw ValidationError("JointSolution: component ids are not dense");
    for (Label l : label_of_)
        if (!g.classes().contains(l)) throw ValidationError("JointSolution: label out of range");

    const std::vector<int> pieces = connected_components(g, [&](int e) {
        return component_of_[g.edge(e).u] == component_of_[g.edge(e).v];
    });
    const int piece_count = pieces.empty() ? 0 : *std::max_element(pieces.begin(), pieces.end()) + 1;
    if (piece_count != k) throw ValidationError("JointSolution: a component is not connected");

    for (const Edge& e : g.edges()) {
        if (is_cut(e) && node_label(e.u) == 0 && node_label(e.v) == 0)
            throw InfeasibleError("JointSolution: cut edge between two background components");
    }
}

JointSolution JointSolution::canonical() const {
    std::vector<int> remap(label_of_.size(), -1);
    JointSolution out;
    out.component_of_.resize(component_of_.size());
    int next = 0;
    for (std::size_t u = 0; u < component_of_.size(); ++u) {
        int& r = remap[component_of_[u]];
        if (r < 0) {
            r = next++;
            out.label_of_.push_back(label_of_[component_of_[u]]);
        }
        out.component_of_[u] = r;
    }
    return out;
}

RegionGraph build_region_graph(const SuperpixelMap& spx, const ScoreGrid& semantic, const ScoreGrid& edge_map) {
    if (semantic.height() != spx.height() || semantic.width() != spx.width() ||
        edge_map.height() != spx.height() || edge_map.width() != spx.width())
        throw ValidationError("build_region_graph: grid dimensions differ");
    if (edge_map.channels() != 1) throw ValidationError("build_region_graph: edge map must have 1 channel");
    if (semantic.channels() < 2) throw ValidationError("build_region_graph: semantic grid needs L+1 >= 2 channels");

    const ClassSet classes(semantic.channels() - 1);
    const int labels = classes.label_count();
    const int n = spx.region_count();
    const int width = spx.width();
    const std::size_t pixels = spx.pixel_count();

    std::vector<double> node_scores(static_cast<std::size_t>(n) * labels, 0.0);
    std::vector<std::size_t> sizes(n, 0);
    for (std::size_t p = 0; p < pixels; ++p) {
        const int r = spx.region_of(p);
        ++sizes[r];
        for (int l = 0; l < labels; ++l) node_scores[static_cast<std::size_t>(r) * labels + l] += semantic.at(p, l);
    }
    for (int r = 0; r < n; ++r)
        for (int l = 0; l < labels; ++l) node_scores[static_cast<std::size_t>(r) * labels + l] /= static_cast<double>(sizes[r]);

    // (region pair, border pixel) records; a pixel touching the same neighbor
    // region through several sides is counted once.
    struct BorderPixel {
        Edge pair;
        std::size_t pixel;
        auto operator<=>(const BorderPixel&) const = default;
    };
    std::vector<BorderPixel> border;
    auto record = [&](std::size_t p, std::size_t q) {
        const int a = spx.region_of(p);
        const int b = spx.region_of(q);
        if (a == b) return;
        const Edge pair{std::min(a, b), std::max(a, b)};
        border.push_back({pair, p});
        border.push_back({pair, q});
    };
    for (std::size_t p = 0; p < pixels; ++p) {
        const int col = static_cast<int>(p % width);
        if (col + 1 < width) record(p, p + 1);
        if (p + width < pixels) record(p, p + width);
    }
    std::sort(border.begin(), border.end());
    border.erase(std::unique(border.begin(), border.end()), border.end());

    std::vector<Edge> edges;
    std::vector<double> edge_scores;
    for (std::size_t i = 0; i < border.size();) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < border.size() && border[j].pair == border[i].pair) sum += edge_map.at(border[j++].pixel, 0);
        edges.push_back(border[i].pair);
        edge_scores.push_back(sum / static_cast<double>(j - i));
        i = j;
    }
    return RegionGraph(classes, n, std::move(edges), std::move(node_scores), std::move(edge_scores));
}

PairPrior make_pair_prior(const SolverParams& params, const ClassSet& classes) {
    params.validate(classes);
    const int n = classes.label_count();
    std::vector<char> big(n, 0);
    for (Label l : params.big_classes) big[l] = 1;
    std::vector<double> beta(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            beta[static_cast<std::size_t>(a) * n + b] = (big[a] || big[b]) ? params.beta_big : params.beta_small;
    return PairPrior(classes, std::move(beta));
}

}  // namespace instancecut
