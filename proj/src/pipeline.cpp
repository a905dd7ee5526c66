#include "instancecut/pipeline.hpp"

#include <algorithm>

namespace instancecut {

PipelineResult run_pipeline(const ScoreGrid& semantic, const ScoreGrid& edge_map, const PipelineConfig& config) {
    SuperpixelMap spx = watershed(edge_map, config.quantization_levels);
    RegionGraph graph = build_region_graph(spx, semantic, edge_map);
    PairPrior prior = make_pair_prior(config.params, graph.classes());
    SolveResult result = solve(graph, prior, config.params, config.solver);
    InstanceMap instances = extract_instances(spx, result.solution);
    return PipelineResult{std::move(spx), std::move(graph), std::move(prior), std::move(result), std::move(instances)};
}

PreparedScene prepare_scene(const ScoreGrid& semantic, const ScoreGrid& edge_map, InstanceMap gt, int quantization_levels) {
    if (gt.height != semantic.height() || gt.width != semantic.width())
        throw ValidationError("prepare_scene: ground truth dimensions differ from the score grids");
    SuperpixelMap spx = watershed(edge_map, quantization_levels);
    RegionGraph graph = build_region_graph(spx, semantic, edge_map);
    return PreparedScene{std::move(spx), std::move(graph), std::move(gt)};
}

GridSearchResult grid_search(const std::vector<PreparedScene>& scenes, const GridSearchConfig& config,
                             const std::function<void(const GridEvaluation&)>& log) {
    if (config.w_values.empty() || config.beta_small_values.empty() || config.beta_big_values.empty())
        throw ValidationError("grid_search: every parameter range must be nonempty");
    if (config.folds < 2) throw ValidationError("grid_search: folds must be >= 2");
    if (scenes.size() < static_cast<std::size_t>(config.folds))
        throw ValidationError("grid_search: need at least one scene per fold");

    auto sorted = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    };
    const std::vector<double> ws = sorted(config.w_values);
    const std::vector<double> small = sorted(config.beta_small_values);
    const std::vector<double> big = sorted(config.beta_big_values);

    GridSearchResult out;
    bool have_best = false;
    for (double w : ws) {
        for (double bs : small) {
            for (double bb : big) {
                SolverParams params = config.base;
                params.w = w;
                params.beta_small = bs;
                params.beta_big = bb;
                double score = 0.0;
                for (int fold = 0; fold < config.folds; ++fold) {
                    double f1_sum = 0.0;
                    int count = 0;
                    for (std::size_t i = fold; i < scenes.size(); i += config.folds) {
                        const PreparedScene& scene = scenes[i];
                        const PairPrior prior = make_pair_prior(params, scene.graph.classes());
                        const SolveResult r = solve(scene.graph, prior, params, config.solver);
                        f1_sum += evaluate(extract_instances(scene.superpixels, r.solution), scene.gt).f1;
                        ++count;
                    }
                    const GridEvaluation eval{w, bs, bb, fold, f1_sum / count};
                    out.evaluations.push_back(eval);
                    if (log) log(eval);
                    score += eval.mean_f1;
                }
                score /= config.folds;
                if (!have_best || score > out.best_score) {
                    have_best = true;
                    out.best = params;
                    out.best_score = score;
                }
            }
        }
    }
    return out;
}

}  // namespace instancecut
