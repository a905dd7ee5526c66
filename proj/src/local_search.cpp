#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "instancecut/objective.hpp"
#include "instancecut/solvers.hpp"

namespace instancecut {

namespace {

// Gains at or below this are treated as zero so rounding noise cannot cycle.
constexpr double kMinGain = 1e-10;

enum class MoveType { relabel = 0, merge = 1, move_node = 2, isolate = 3 };

struct Move {
    MoveType type = MoveType::relabel;
    int first = -1;   // component (relabel, merge) or node (move_node, isolate)
    int second = -1;  // other component (merge) or target component (move_node)
    Label label = 0;  // new label (relabel, isolate)
    double gain = kMinGain;

    bool valid() const { return first >= 0; }
};

struct EdgeStat {
    double sum = 0.0;
    int count = 0;
};

struct NeighborComponent {
    int comp;
    double edge_sum;
    int edge_count;
};

// Component ids per node (any integers; disconnected ids are split) and the
// label of each id.
struct Start {
    std::vector<int> component_of;
    std::vector<Label> label_of;
};

// Search state with stable component ids. Every node and component caches its
// best move; a move re-prices only what it touched, and each round picks the
// best cached move in scan order.
class LocalSearch {
public:
    LocalSearch(const RegionGraph& g, const PairPrior& prior, double w, std::vector<NodeId> node_order)
        : g_(g), prior_(prior), w_(w), labels_(g.label_count()), node_order_(std::move(node_order)),
          rank_(g.node_count()), counts_(labels_, 0) {
        for (std::size_t i = 0; i < node_order_.size(); ++i) rank_[node_order_[i]] = static_cast<int>(i);
    }

    void start(const Start& s) {
        const int n = g_.node_count();
        comp_.assign(n, -1);
        pos_.assign(n, 0);
        members_.clear();
        lab_.clear();
        alive_.clear();
        min_node_.clear();
        alpha_.clear();
        cut_.clear();
        adj_.clear();
        free_.clear();
        best_relabel_.clear();
        best_merge_.clear();
        comp_dirty_.clear();
        dirty_comps_.clear();

        const std::vector<int> dense = connected_components(
            g_, [&](int e) { return s.component_of[g_.edge(e).u] == s.component_of[g_.edge(e).v]; });
        const int k = *std::max_element(dense.begin(), dense.end()) + 1;
        for (int c = 0; c < k; ++c) add_component(0);
        for (NodeId u = 0; u < n; ++u) {
            const int c = dense[u];
            lab_[c] = s.label_of[s.component_of[u]];
            comp_[u] = c;
            pos_[u] = static_cast<int>(members_[c].size());
            members_[c].push_back(u);
            min_node_[c] = std::min(min_node_[c], u);
            for (Label l = 0; l < labels_; ++l) alpha_[at(c, l)] += g_.alpha(u, l);
        }
        for (int e = 0; e < g_.edge_count(); ++e) {
            const int a = comp_[g_.edge(e).u];
            const int b = comp_[g_.edge(e).v];
            if (a != b) link(a, b, g_.edge_score(e));
        }

        best_move_node_.assign(n, Move{});
        best_isolate_.assign(n, Move{});
        node_dirty_.assign(n, 1);
        dirty_nodes_.resize(n);
        std::iota(dirty_nodes_.begin(), dirty_nodes_.end(), 0);
        for (int c = 0; c < k; ++c) mark_comp(c);
        refresh();

        objective_ = joint_objective(g_, prior_, w_, solution());
        trace_.assign(1, objective_);
        moves_ = 0;
    }

    /// One best-improvement round; returns false at a local optimum.
    bool step(bool verify) {
        const Move m = best_move();
        if (!m.valid()) return false;
        apply(m);
        refresh();
        objective_ += m.gain;
        trace_.push_back(objective_);
        ++moves_;
        if (verify) {
            const double full = joint_objective(g_, prior_, w_, solution());
            if (std::abs(full - objective_) > 1e-9 * std::max(1.0, std::abs(full)))
                throw std::logic_error("joint_local_search: incremental objective drifted from full evaluation");
        }
        return true;
    }

    /// Current solution with component ids ordered by smallest node.
    JointSolution solution() const {
        std::vector<int> dense(lab_.size(), -1);
        std::vector<int> component_of(g_.node_count());
        std::vector<Label> label_of;
        for (NodeId u = 0; u < g_.node_count(); ++u) {
            const int c = comp_[u];
            if (dense[c] < 0) {
                dense[c] = static_cast<int>(label_of.size());
                label_of.push_back(lab_[c]);
            }
            component_of[u] = dense[c];
        }
        return JointSolution(g_, std::move(component_of), std::move(label_of));
    }

    const std::vector<double>& trace() const { return trace_; }
    int moves() const { return moves_; }

private:
    std::size_t at(int c, Label l) const { return static_cast<std::size_t>(c) * labels_ + l; }

    // sum over m of counts[m] * beta(l, m); callers exclude the forbidden pair.
    double beta_sum(Label l, const int* counts) const {
        double s = 0.0;
        for (Label m = 0; m < labels_; ++m)
            if (counts[m] != 0) s += counts[m] * prior_.beta_unchecked(l, m);
        return s;
    }

    int add_component(Label l) {
        int c;
        if (!free_.empty()) {
            c = free_.back();
            free_.pop_back();
        } else {
            c = static_cast<int>(lab_.size());
            lab_.push_back(0);
            alive_.push_back(0);
            min_node_.push_back(0);
            members_.emplace_back();
            adj_.emplace_back();
            alpha_.resize(alpha_.size() + labels_);
            cut_.resize(cut_.size() + labels_);
            best_relabel_.emplace_back();
            best_merge_.emplace_back();
            comp_dirty_.push_back(0);
        }
        lab_[c] = l;
        alive_[c] = 1;
        min_node_[c] = g_.node_count();
        std::fill_n(alpha_.begin() + at(c, 0), labels_, 0.0);
        std::fill_n(cut_.begin() + at(c, 0), labels_, 0);
        best_relabel_[c] = Move{};
        best_merge_[c] = Move{};
        return c;
    }

    // Adds (sign = 1) or removes (sign = -1) one cut edge with score b between a and c.
    void link(int a, int c, double b, int sign = 1) {
        for (const auto& [x, y] : {std::pair{a, c}, std::pair{c, a}}) {
            EdgeStat& s = adj_[x][y];
            s.count += sign;
            if (s.count == 0) adj_[x].erase(y);
            else s.sum += sign * b;
            cut_[at(x, lab_[y])] += sign;
        }
    }

    void mark_node(NodeId u) {
        if (!node_dirty_[u]) {
            node_dirty_[u] = 1;
            dirty_nodes_.push_back(u);
        }
    }

    void mark_comp(int c) {
        if (!comp_dirty_[c]) {
            comp_dirty_[c] = 1;
            dirty_comps_.push_back(c);
        }
    }

    // Reassigns u to component `to`, keeping every aggregate consistent.
    void transfer(NodeId u, int to) {
        const int from = comp_[u];
        for (const Incidence& inc : g_.neighbors(u)) {
            const int c = comp_[inc.node];
            if (c != from) link(from, c, g_.edge_score(inc.edge), -1);
        }
        std::vector<NodeId>& src = members_[from];
        const NodeId last = src.back();
        src[pos_[u]] = last;
        pos_[last] = pos_[u];
        src.pop_back();
        comp_[u] = to;
        pos_[u] = static_cast<int>(members_[to].size());
        members_[to].push_back(u);
        for (Label l = 0; l < labels_; ++l) {
            alpha_[at(from, l)] -= g_.alpha(u, l);
            alpha_[at(to, l)] += g_.alpha(u, l);
        }
        for (const Incidence& inc : g_.neighbors(u)) {
            const int c = comp_[inc.node];
            if (c != to) link(to, c, g_.edge_score(inc.edge));
            mark_node(inc.node);
            mark_comp(c);
        }
        mark_node(u);
        mark_comp(from);
        mark_comp(to);

        min_node_[to] = std::min(min_node_[to], u);
        if (src.empty()) {
            alive_[from] = 0;
            free_.push_back(from);
        } else if (min_node_[from] == u) {
            min_node_[from] = *std::min_element(src.begin(), src.end());
            for (const auto& [c, stat] : adj_[from]) mark_comp(c);
        }
    }

    // After `removed` left c, splits c into its connected pieces. The largest
    // piece (first found on ties) keeps the id.
    void split_if_disconnected(int c, NodeId removed) {
        if (!alive_[c]) return;
        visited_.resize(g_.node_count(), 0);
        std::vector<NodeId> frontier;
        int pending = -1;
        for (const Incidence& inc : g_.neighbors(removed)) {
            if (comp_[inc.node] != c || visited_[inc.node]) continue;
            visited_[inc.node] = 2;  // former neighbor not yet reached
            ++pending;
            if (frontier.empty()) frontier.push_back(inc.node);
        }
        if (pending <= 0) {
            for (const Incidence& inc : g_.neighbors(removed)) visited_[inc.node] = 0;
            return;
        }
        // Search from one former neighbor until it reaches all the others.
        visited_[frontier[0]] = 1;
        for (std::size_t i = 0; i < frontier.size() && pending > 0; ++i) {
            for (const Incidence& inc : g_.neighbors(frontier[i])) {
                if (comp_[inc.node] != c || visited_[inc.node] == 1) continue;
                if (visited_[inc.node] == 2) --pending;
                visited_[inc.node] = 1;
                frontier.push_back(inc.node);
            }
        }
        for (const NodeId u : frontier) visited_[u] = 0;
        for (const Incidence& inc : g_.neighbors(removed)) visited_[inc.node] = 0;
        if (pending == 0) return;

        std::vector<std::vector<NodeId>> pieces;
        for (const NodeId s : members_[c]) {
            if (visited_[s]) continue;
            std::vector<NodeId>& piece = pieces.emplace_back(1, s);
            visited_[s] = 1;
            for (std::size_t i = 0; i < piece.size(); ++i) {
                for (const Incidence& inc : g_.neighbors(piece[i])) {
                    if (comp_[inc.node] == c && !visited_[inc.node]) {
                        visited_[inc.node] = 1;
                        piece.push_back(inc.node);
                    }
                }
            }
        }
        for (const NodeId u : members_[c]) visited_[u] = 0;
        if (pieces.size() < 2) return;

        std::size_t keep = 0;
        for (std::size_t i = 1; i < pieces.size(); ++i)
            if (pieces[i].size() > pieces[keep].size()) keep = i;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            if (i == keep) continue;
            const int fresh = add_component(lab_[c]);
            for (const NodeId u : pieces[i]) transfer(u, fresh);
        }
    }

    void apply(const Move& m) {
        switch (m.type) {
            case MoveType::relabel: {
                const int c = m.first;
                for (const auto& [d, stat] : adj_[c]) {
                    cut_[at(d, lab_[c])] -= stat.count;
                    cut_[at(d, m.label)] += stat.count;
                    mark_comp(d);
                }
                lab_[c] = m.label;
                mark_comp(c);
                for (const NodeId u : members_[c]) {
                    mark_node(u);
                    for (const Incidence& inc : g_.neighbors(u)) mark_node(inc.node);
                }
                break;
            }
            case MoveType::merge: {
                int keep = m.first, gone = m.second;
                if (members_[gone].size() > members_[keep].size()) std::swap(keep, gone);
                const std::vector<NodeId> moving = members_[gone];
                for (const NodeId u : moving) transfer(u, keep);
                break;
            }
            case MoveType::move_node: {
                const int from = comp_[m.first];
                transfer(m.first, m.second);
                split_if_disconnected(from, m.first);
                break;
            }
            case MoveType::isolate: {
                const int from = comp_[m.first];
                transfer(m.first, add_component(m.label));
                split_if_disconnected(from, m.first);
                break;
            }
        }
    }

    void refresh() {
        for (const NodeId u : dirty_nodes_) {
            node_dirty_[u] = 0;
            price_node(u);
        }
        dirty_nodes_.clear();
        for (const int c : dirty_comps_) {
            comp_dirty_[c] = 0;
            if (alive_[c]) price_component(c);
        }
        dirty_comps_.clear();
    }

    void price_component(int c) {
        const Label l = lab_[c];
        const int* counts = &cut_[at(c, 0)];
        const double current = beta_sum(l, counts);
        Move relabel;
        for (Label target = 0; target < labels_; ++target) {
            if (target == l || (target == 0 && counts[0] > 0)) continue;
            const double gain =
                alpha_[at(c, target)] - alpha_[at(c, l)] + w_ * (beta_sum(target, counts) - current);
            if (gain > relabel.gain) relabel = {MoveType::relabel, c, -1, target, gain};
        }
        best_relabel_[c] = relabel;

        Move merge;
        if (l != 0) {
            for (const auto& [d, stat] : adj_[c]) {
                if (lab_[d] != l) continue;
                const double gain = -w_ * (stat.sum + stat.count * prior_.beta_unchecked(l, l));
                consider({MoveType::merge, c, d, l, gain}, merge);
            }
        }
        best_merge_[c] = merge;
    }

    // Prices every move_node and isolate move for node u.
    void price_node(NodeId u) {
        const int home = comp_[u];
        const Label home_label = lab_[home];
        double edge_total = 0.0;
        neighbor_comps_.clear();
        for (const Incidence& inc : g_.neighbors(u)) {
            const int c = comp_[inc.node];
            const double b = g_.edge_score(inc.edge);
            edge_total += b;
            ++counts_[lab_[c]];
            auto it = std::find_if(neighbor_comps_.begin(), neighbor_comps_.end(),
                                   [c](const NeighborComponent& n) { return n.comp == c; });
            if (it == neighbor_comps_.end())
                neighbor_comps_.push_back({c, b, 1});
            else {
                it->edge_sum += b;
                ++it->edge_count;
            }
        }

        double home_sum = 0.0;
        int home_count = 0;
        for (const NeighborComponent& n : neighbor_comps_) {
            if (n.comp == home) {
                home_sum = n.edge_sum;
                home_count = n.edge_count;
            }
        }

        // Cut score of u's edges in the current state: every edge leaving home.
        counts_[home_label] -= home_count;
        const double before = (edge_total - home_sum) + beta_sum(home_label, counts_.data());
        counts_[home_label] += home_count;

        Move move_node;
        if (home_count < g_.degree(u)) {
            for (const NeighborComponent& n : neighbor_comps_) {
                if (n.comp == home) continue;
                const Label target = lab_[n.comp];
                counts_[target] -= n.edge_count;
                if (!(target == 0 && counts_[0] > 0)) {
                    const double after = (edge_total - n.edge_sum) + beta_sum(target, counts_.data());
                    const double gain = g_.alpha(u, target) - g_.alpha(u, home_label) + w_ * (after - before);
                    consider({MoveType::move_node, u, n.comp, target, gain}, move_node);
                }
                counts_[target] += n.edge_count;
            }
        }
        best_move_node_[u] = move_node;

        Move isolate;
        if (members_[home].size() >= 2) {
            for (Label target = 0; target < labels_; ++target) {
                if (target == 0 && counts_[0] > 0) continue;
                const double after = edge_total + beta_sum(target, counts_.data());
                const double gain = g_.alpha(u, target) - g_.alpha(u, home_label) + w_ * (after - before);
                if (gain > isolate.gain) isolate = {MoveType::isolate, u, -1, target, gain};
            }
        }
        best_isolate_[u] = isolate;

        for (const NeighborComponent& n : neighbor_comps_) counts_[lab_[n.comp]] = 0;
    }

    // Scan order: move type, then canonical component or node ids, then label.
    // Components are ranked by their smallest node, nodes by the scan order.
    std::array<int, 4> scan_key(const Move& m) const {
        switch (m.type) {
            case MoveType::relabel:
                return {0, min_node_[m.first], 0, m.label};
            case MoveType::merge: {
                const int a = min_node_[m.first], b = min_node_[m.second];
                return {1, std::min(a, b), std::max(a, b), 0};
            }
            case MoveType::move_node:
                return {2, rank_[m.first], min_node_[m.second], 0};
            case MoveType::isolate:
                return {3, m.first, 0, m.label};
        }
        return {};
    }

    void consider(const Move& m, Move& best) const {
        if (!m.valid()) return;
        if (m.gain > best.gain || (best.valid() && m.gain == best.gain && scan_key(m) < scan_key(best))) best = m;
    }

    Move best_move() const {
        Move best;
        for (std::size_t c = 0; c < lab_.size(); ++c) {
            if (!alive_[c]) continue;
            consider(best_relabel_[c], best);
            consider(best_merge_[c], best);
        }
        for (NodeId u = 0; u < g_.node_count(); ++u) {
            consider(best_move_node_[u], best);
            consider(best_isolate_[u], best);
        }
        return best;
    }

    const RegionGraph& g_;
    const PairPrior& prior_;
    double w_;
    int labels_;
    std::vector<NodeId> node_order_;
    std::vector<int> rank_;

    std::vector<int> comp_;
    std::vector<int> pos_;
    std::vector<std::vector<NodeId>> members_;
    std::vector<Label> lab_;
    std::vector<char> alive_;
    std::vector<NodeId> min_node_;
    std::vector<double> alpha_;
    std::vector<int> cut_;  // cut edges leaving each component, by neighbor label
    std::vector<std::unordered_map<int, EdgeStat>> adj_;
    std::vector<int> free_;

    std::vector<Move> best_relabel_;
    std::vector<Move> best_merge_;
    std::vector<Move> best_move_node_;
    std::vector<Move> best_isolate_;

    std::vector<char> node_dirty_;
    std::vector<char> comp_dirty_;
    std::vector<NodeId> dirty_nodes_;
    std::vector<int> dirty_comps_;
    std::vector<char> visited_;

    std::vector<int> counts_;
    std::vector<NeighborComponent> neighbor_comps_;

    double objective_ = 0.0;
    std::vector<double> trace_;
    int moves_ = 0;
};

// Portable Fisher-Yates: std::shuffle's draw sequence is implementation-defined.
std::vector<NodeId> permuted_order(int n, std::mt19937_64& rng) {
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng() % static_cast<std::uint64_t>(i + 1)]);
    return order;
}

// Label segments of a labeling as components.
Start segments(const std::vector<Label>& labeling, int label_count) {
    Start s{std::vector<int>(labeling.begin(), labeling.end()), std::vector<Label>(label_count)};
    std::iota(s.label_of.begin(), s.label_of.end(), 0);
    return s;
}

// In priority order: ICM segments, unary-argmax segments, argmax singletons
// (background nodes grouped), and one all-in-one component per label.
std::vector<Start> starting_points(const RegionGraph& g, const PairPrior& prior, double w) {
    const int n = g.node_count();
    const int k = g.label_count();
    std::vector<Start> starts;
    starts.push_back(segments(crf_solve(g, prior, w), k));
    const std::vector<Label> argmax = crf_solve(g, prior, 0.0);
    starts.push_back(segments(argmax, k));

    Start singletons{std::vector<int>(n), std::vector<Label>(n + 1, 0)};
    for (NodeId u = 0; u < n; ++u) {
        singletons.component_of[u] = argmax[u] == 0 ? n : u;
        singletons.label_of[u] = argmax[u];
    }
    starts.push_back(std::move(singletons));

    for (Label l = 0; l < k; ++l) starts.push_back({std::vector<int>(n, 0), {l}});
    return starts;
}

}  // namespace

SolveResult joint_local_search(const RegionGraph& g, const PairPrior& prior, const SolverParams& params) {
    const auto start = std::chrono::steady_clock::now();
    params.validate(g.classes());
    const std::vector<Start> starts = starting_points(g, prior, params.w);

    std::mt19937_64 rng(params.seed);
    std::vector<NodeId> order(g.node_count());
    std::iota(order.begin(), order.end(), 0);

    std::optional<SolveResult> best;
    for (int restart = 0; restart <= params.restarts; ++restart) {
        LocalSearch search(g, prior, params.w, restart == 0 ? order : permuted_order(g.node_count(), rng));
        for (const Start& s : starts) {
            search.start(s);
            int rounds = 0;
            while (rounds < params.max_rounds) {
                ++rounds;
                if (!search.step(params.verify_incremental)) break;
            }
            JointSolution solution = search.solution();
            const double objective = joint_objective(g, prior, params, solution);
            if (!best || objective > best->objective)
                best = SolveResult{std::move(solution), objective, rounds, search.moves(), {}, search.trace()};
        }
    }
    best->wall_time = std::chrono::steady_clock::now() - start;
    return std::move(*best);
}

}  // namespace instancecut
