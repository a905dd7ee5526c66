// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <random>
#include <string>

#include "instancecut/evaluate.hpp"
#include "instancecut/groundtruth.hpp"
#include "instancecut/io.hpp"
#include "instancecut/objective.hpp"
#include "instancecut/pipeline.hpp"
#include "instancecut/pixel.hpp"
#include "instancecut/serialize.hpp"
#include "instancecut/solvers.hpp"
#include "instancecut/synth.hpp"
#include "oracles.hpp"

using namespace instancecut;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
    std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

void oracle_equivalence() {
    std::mt19937_64 rng(1001);
    int equal = 0, exceeded = 0, infeasible = 0;
    const int trials = 200;
    const auto t0 = Clock::now();
    for (int t = 0; t < trials; ++t) {
        const int n = oracle::uniform_int(rng, 4, 8);
        const int num_labels = oracle::uniform_int(rng, 1, 2);
        const double density = oracle::uniform(rng, 0.4, 0.8);
        const RegionGraph g = oracle::random_graph(rng, n, num_labels, density);
        const PairPrior prior = oracle::random_prior(rng, num_labels);
        SolverParams params;
        params.w = 1.0;
        const SolveResult local = joint_local_search(g, prior, params);
        const SolveResult exact = oracle_exact(g, prior, params);
        if (!check_feasibility(g, to_assignment(g, local.solution)).feasible()) ++infeasible;
        if (local.objective > exact.objective) ++exceeded;
        if (local.objective == exact.objective) ++equal;
    }
    const double secs = seconds_since(t0);
    const bool pass = exceeded == 0 && equal >= 180 && infeasible == 0 && secs < 60.0;
    report(1, pass,
           fmt("oracle equivalence: equal %d/%d (need >= 180), exceeded %d, infeasible %d, %.2f s (limit 60 s)", equal,
               trials, exceeded, infeasible, secs));
}

void formulation_cross_check() {
    int checked = 0, mismatched = 0;
    std::mt19937_64 rng(1002);
    for (const auto& entry : fs::directory_iterator(INSTANCECUT_FIXTURES_DIR)) {
        if (entry.path().extension() != ".json") continue;
        const RegionGraph g = graph_from_json(read_file(entry.path()));
        if (g.node_count() > 6) continue;
        // Default prior plus a few random priors and weights per fixture.
        std::vector<std::pair<PairPrior, double>> setups;
        setups.emplace_back(make_pair_prior(SolverParams{}, g.classes()), 1.0);
        for (int k = 0; k < 4; ++k)
            setups.emplace_back(oracle::random_prior(rng, g.classes().num_labels()), oracle::uniform(rng, 0.25, 2.0));
        for (const auto& [prior, w] : setups) {
            const double by_partition = oracle::partition_max(g, prior, w);
            const double by_assignment = oracle::exhaustive_assignment_max(g, prior, w);
            ++checked;
            if (by_partition != by_assignment) ++mismatched;
        }
    }
    report(2, checked > 0 && mismatched == 0,
           fmt("formulation cross-check: %d fixture/prior pairs, %d mismatches (exact equality)", checked, mismatched));
}

void end_to_end_recovery() {
    int exact = 0;
    double f1_sum = 0.0;
    const int scenes = 20;
    for (int s = 0; s < scenes; ++s) {
        SynthConfig c;
        c.seed = static_cast<std::uint64_t>(s);
        c.num_instances = 3 + s % 6;
        c.sigma = 0.0;
        const SyntheticScene clean = synth(c);
        const MatchReport r0 = evaluate(run_pipeline(clean.semantic, clean.edge, {}).instances, clean.gt);
        if (r0.exact_match && r0.precision == 1.0 && r0.recall == 1.0) ++exact;
        c.sigma = 0.5;
        const SyntheticScene noisy = synth(c);
        f1_sum += evaluate(run_pipeline(noisy.semantic, noisy.edge, {}).instances, noisy.gt).f1;
    }
    const double mean_f1 = f1_sum / scenes;
    report(3, exact == scenes && mean_f1 >= 0.9,
           fmt("end-to-end recovery: sigma=0 exact %d/%d (need 20), sigma=0.5 mean F1 %.4f (need >= 0.9)", exact,
               scenes, mean_f1));
}

void scale_and_time() {
    // 50 x 60 grid graph with a random diagonal in about half the cells; eight
    // instance labels plus background.
    const int rows = 50, cols = 60, n = rows * cols, num_labels = 8;
    std::mt19937_64 rng(1004);
    std::vector<Edge> edges;
    auto id = [&](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1)});
            if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c)});
            if (r + 1 < rows && c + 1 < cols && oracle::uniform(rng, 0, 1) < 0.5) {
                if (oracle::uniform(rng, 0, 1) < 0.5) edges.push_back({id(r, c), id(r + 1, c + 1)});
                else edges.push_back({id(r, c + 1), id(r + 1, c)});
            }
        }
    std::vector<double> alpha(static_cast<std::size_t>(n) * (num_labels + 1));
    for (double& a : alpha) a = oracle::uniform(rng, -2, 2);
    std::vector<double> b(edges.size());
    for (double& x : b) x = oracle::uniform(rng, -2, 2);
    const double edges_per_node = static_cast<double>(edges.size()) / n;
    const RegionGraph g(ClassSet(num_labels), n, std::move(edges), std::move(alpha), std::move(b));
    // A zero class prior keeps cut scores of both signs, so the optimum has many components.
    SolverParams params;
    params.beta_small = params.beta_big = 0.0;
    const PairPrior prior = make_pair_prior(params, g.classes());
    const auto t0 = Clock::now();
    const SolveResult r = joint_local_search(g, prior, params);
    const double secs = seconds_since(t0);
    const bool feasible = check_feasibility(g, to_assignment(g, r.solution)).feasible();
    report(4, feasible && secs < 5.0,
           fmt("scale: %d nodes, %d labels with background, %.2f edges/node, %d components, %.3f s (limit 5 s), "
               "feasible %s",
               n, num_labels + 1, edges_per_node, r.solution.component_count(), secs, feasible ? "yes" : "no"));
}

bool four_connected_partition(const SuperpixelMap& spx) {
    const int h = spx.height(), w = spx.width();
    std::vector<int> seen(spx.pixel_count(), 0);
    std::vector<int> visits(spx.region_count(), 0);
    for (std::size_t s = 0; s < spx.pixel_count(); ++s) {
        if (seen[s]) continue;
        const int r = spx.region_of(s);
        if (r < 0 || r >= spx.region_count() || ++visits[r] > 1) return false;
        std::vector<std::size_t> stack{s};
        seen[s] = 1;
        while (!stack.empty()) {
            const std::size_t p = stack.back();
            stack.pop_back();
            const int pr = static_cast<int>(p) / w, pc = static_cast<int>(p) % w;
            const int nr[4] = {pr - 1, pr + 1, pr, pr}, nc[4] = {pc, pc, pc - 1, pc + 1};
            for (int k = 0; k < 4; ++k) {
                if (nr[k] < 0 || nr[k] >= h || nc[k] < 0 || nc[k] >= w) continue;
                const std::size_t q = static_cast<std::size_t>(nr[k]) * w + nc[k];
                if (!seen[q] && spx.region_of(q) == r) {
                    seen[q] = 1;
                    stack.push_back(q);
                }
            }
        }
    }
    for (int v : visits)
        if (v != 1) return false;
    return true;
}

void watershed_properties() {
    std::mt19937_64 rng(1005);
    const int maps = 500, h = 32, w = 32;
    int partition_bad = 0, minima_bad = 0, shift_bad = 0;
    for (int t = 0; t < maps; ++t) {
        // Values on a dyadic lattice so a constant dyadic offset is exact in float.
        const int distinct = oracle::uniform_int(rng, 2, 64);
        const int levels = oracle::uniform_int(rng, 2, 256);
        std::vector<float> v(h * w);
        for (float& x : v) x = static_cast<float>(oracle::uniform_int(rng, 0, distinct - 1)) * 0.125f;
        const ScoreGrid edge(h, w, 1, v);
        SuperpixelMap spx(1, 1, {0});
        try {
            spx = watershed(edge, levels);
        } catch (const ValidationError&) {
            ++partition_bad;
            continue;
        }
        if (!four_connected_partition(spx)) ++partition_bad;
        if (spx.region_count() != oracle::count_regional_minima(quantize_edges(edge, levels), h, w)) ++minima_bad;
        const float offset = static_cast<float>(oracle::uniform_int(rng, -512, 512)) * 0.125f;
        for (float& x : v) x += offset;
        if (!(watershed(ScoreGrid(h, w, 1, v), levels) == spx)) ++shift_bad;
    }
    report(5, partition_bad == 0 && minima_bad == 0 && shift_bad == 0,
           fmt("watershed: %d maps, partition failures %d, minima-count mismatches %d, shift mismatches %d", maps,
               partition_bad, minima_bad, shift_bad));
}

void loss_and_ground_truth() {
    const double ln2 = std::log(2.0), ln10 = std::log(10.0);
    struct Point {
        double p;
        int y;
        double alpha;
        double expected;
    };
    const Point points[] = {
        {1.0, 1, 1.0, 1e-12},
        {0.5, 0, 1.0, ln2},
        {0.5, 1, 3.0, ln2},
        {0.25, 1, 1.0, 2 * ln2},
        {0.75, 0, 2.0, 4 * ln2},
        {0.9, 0, 1.0 / 9.0, ln10 / 9.0},
        {std::exp(-1.0), 1, 0.3, 1.0},
        {1.0 - std::exp(-2.0), 0, 0.5, 1.0},
        {0.0, 1, 1.0, 12 * ln10},
        {0.0, 0, 2.0, 2e-12},
    };
    int point_bad = 0;
    for (const Point& pt : points)
        if (!(std::abs(balanced_loss(pt.p, pt.y, pt.alpha) - pt.expected) <= 1e-12)) ++point_bad;

    std::mt19937_64 rng(1006);
    int nll_bad = 0;
    for (int i = 0; i < 100; ++i) {
        const double p = oracle::uniform(rng, 0.001, 0.999);
        const int y = oracle::uniform_int(rng, 0, 1);
        const double nll = -(y * std::log(p) + (1 - y) * std::log(1 - p));
        if (!(std::abs(balanced_loss(p, y, 1.0) - nll) <= 1e-12 * std::max(1.0, nll))) ++nll_bad;
    }

    int gt_bad = 0;
    const int h = 16, w = 16;
    for (int t = 0; t < 50; ++t) {
        InstanceIdMap m{h, w, std::vector<std::uint32_t>(h * w, 0)};
        const int count = oracle::uniform_int(rng, 0, 6);
        for (int id = 1; id <= count; ++id) {
            const int r0 = oracle::uniform_int(rng, 0, h - 1), c0 = oracle::uniform_int(rng, 0, w - 1);
            const int r1 = oracle::uniform_int(rng, r0, h - 1), c1 = oracle::uniform_int(rng, c0, w - 1);
            for (int r = r0; r <= r1; ++r)
                for (int c = c0; c <= c1; ++c) m.ids[r * w + c] = static_cast<std::uint32_t>(id);
        }
        if (derive_boundary_gt(m).labels != oracle::boundary_by_neighborhood(m.ids, h, w)) ++gt_bad;
    }
    report(6, point_bad == 0 && nll_bad == 0 && gt_bad == 0,
           fmt("loss/gt: fixed points off %d/10 (tol 1e-12), NLL reduction off %d/100, boundary GT mismatches %d/50",
               point_bad, nll_bad, gt_bad));
}

void format_round_trips() {
    std::mt19937_64 rng(1007);
    const fs::path dir = fs::temp_directory_path() / "instancecut_acceptance";
    fs::create_directories(dir);
    int sgm_bad = 0, lbm_bad = 0;
    for (int t = 0; t < 100; ++t) {
        const int h = oracle::uniform_int(rng, 1, 40), w = oracle::uniform_int(rng, 1, 40),
                  c = oracle::uniform_int(rng, 1, 9);
        std::vector<float> v(static_cast<std::size_t>(h) * w * c);
        for (float& x : v) {
            do {
                x = std::bit_cast<float>(static_cast<std::uint32_t>(rng()));
            } while (!std::isfinite(x));
        }
        const ScoreGrid grid(h, w, c, v);
        write_sgm(dir / "g.sgm", grid);
        const ScoreGrid back = read_sgm(dir / "g.sgm");
        if (back.height() != h || back.width() != w || back.channels() != c ||
            std::memcmp(back.values().data(), v.data(), v.size() * sizeof(float)) != 0)
            ++sgm_bad;

        LabelMap m{h, w, std::vector<std::uint32_t>(static_cast<std::size_t>(h) * w)};
        for (auto& x : m.values) x = static_cast<std::uint32_t>(rng());
        write_lbm(dir / "m.lbm", m);
        if (!(read_lbm(dir / "m.lbm") == m)) ++lbm_bad;
    }
    fs::remove_all(dir);
    report(7, sgm_bad == 0 && lbm_bad == 0,
           fmt("format round trips: sgm mismatches %d/100, lbm mismatches %d/100", sgm_bad, lbm_bad));
}

}  // namespace

int main() {
    const auto run = [](int id, void (*fn)()) {
        try {
            fn();
        } catch (const std::exception& e) {
            report(id, false, std::string("threw: ") + e.what());
        }
    };
    run(1, oracle_equivalence);
    run(2, formulation_cross_check);
    run(3, end_to_end_recovery);
    run(4, scale_and_time);
    run(5, watershed_properties);
    run(6, loss_and_ground_truth);
    run(7, format_round_trips);
    std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
    return failures == 0 ? 0 : 1;
}
