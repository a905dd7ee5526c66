// instancecut: command-line front end for the superpixel / multicut pipeline.
//
// Exit codes: 0 success, 2 validation error, 3 infeasible input or solver failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "instancecut/evaluate.hpp"
#include "instancecut/io.hpp"
#include "instancecut/pipeline.hpp"
#include "instancecut/serialize.hpp"
#include "instancecut/synth.hpp"

namespace fs = std::filesystem;
using namespace instancecut;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;

struct SolverOptions {
    SolverParams params;
    std::string solver = "local";
};

void add_solver_options(CLI::App* cmd, SolverOptions& opt) {
    cmd->add_option("--w", opt.params.w, "Weight of the pairwise (boundary) term")->capture_default_str();
    cmd->add_option("--beta-small", opt.params.beta_small, "Class-pair prior for small classes")->capture_default_str();
    cmd->add_option("--beta-big", opt.params.beta_big, "Class-pair prior for pairs touching a big class")->capture_default_str();
    cmd->add_option("--big-classes", opt.params.big_classes, "Labels treated as big classes")->delimiter(',');
    cmd->add_option("--solver", opt.solver, "Solver")
        ->check(CLI::IsMember({"local", "oracle", "crf", "greedy"}))
        ->capture_default_str();
    cmd->add_option("--seed", opt.params.seed, "Seed for restart orderings")->capture_default_str();
    cmd->add_option("--max-rounds", opt.params.max_rounds, "Local search round cap")->capture_default_str();
    cmd->add_option("--restarts", opt.params.restarts, "Extra local search restarts")->capture_default_str();
}

void print_solve_summary(const SolveResult& r, SolverKind kind) {
    std::printf("solver=%s objective=%.17g components=%d rounds=%d moves=%d\n", std::string(to_string(kind)).c_str(),
                r.objective, r.solution.component_count(), r.rounds, r.moves_applied);
}

struct SceneFiles {
    fs::path semantic, edge, gt;
    explicit SceneFiles(const fs::path& dir) : semantic(dir / "semantic.sgm"), edge(dir / "edge.sgm"), gt(dir / "gt.lbm") {}
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"InstanceCut: superpixels, region graphs and joint labeling + multicut"};
    app.require_subcommand(1);

    // synth
    SynthConfig synth_cfg;
    fs::path synth_dir;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic scene (semantic.sgm, edge.sgm, gt.lbm)");
    synth_cmd->add_option("--height", synth_cfg.height)->capture_default_str();
    synth_cmd->add_option("--width", synth_cfg.width)->capture_default_str();
    synth_cmd->add_option("--instances", synth_cfg.num_instances)->capture_default_str();
    synth_cmd->add_option("--labels", synth_cfg.num_labels, "Number of instance classes L")->capture_default_str();
    synth_cmd->add_option("--sigma", synth_cfg.sigma, "Gaussian noise level")->capture_default_str();
    synth_cmd->add_option("--seed", synth_cfg.seed)->capture_default_str();
    synth_cmd->add_option("--min-size", synth_cfg.min_size)->capture_default_str();
    synth_cmd->add_option("--max-size", synth_cfg.max_size)->capture_default_str();
    synth_cmd->add_option("--out-dir", synth_dir)->required();

    // superpixels
    fs::path spx_edge, spx_out;
    int levels = kDefaultQuantizationLevels;
    auto* spx_cmd = app.add_subcommand("superpixels", "Watershed superpixels from an edge map");
    spx_cmd->add_option("--edge", spx_edge)->required()->check(CLI::ExistingFile);
    spx_cmd->add_option("--levels", levels, "Quantization levels")->capture_default_str();
    spx_cmd->add_option("--out", spx_out)->required();

    // graph
    fs::path graph_spx, graph_semantic, graph_edge, graph_out;
    auto* graph_cmd = app.add_subcommand("graph", "Build the region adjacency graph (JSON)");
    graph_cmd->add_option("--spx", graph_spx)->required()->check(CLI::ExistingFile);
    graph_cmd->add_option("--semantic", graph_semantic)->required()->check(CLI::ExistingFile);
    graph_cmd->add_option("--edge", graph_edge)->required()->check(CLI::ExistingFile);
    graph_cmd->add_option("--out", graph_out)->required();

    // solve
    fs::path solve_graph, solve_out;
    SolverOptions solve_opt;
    auto* solve_cmd = app.add_subcommand("solve", "Solve a graph dump");
    solve_cmd->add_option("--graph", solve_graph)->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--out", solve_out, "Solution JSON");
    add_solver_options(solve_cmd, solve_opt);

    // pipeline
    fs::path pipe_semantic, pipe_edge, pipe_out, pipe_solution, pipe_spx;
    int pipe_levels = kDefaultQuantizationLevels;
    SolverOptions pipe_opt;
    auto* pipe_cmd = app.add_subcommand("pipeline", "Score maps to instance map in one step");
    pipe_cmd->add_option("--semantic", pipe_semantic)->required()->check(CLI::ExistingFile);
    pipe_cmd->add_option("--edge", pipe_edge)->required()->check(CLI::ExistingFile);
    pipe_cmd->add_option("--levels", pipe_levels)->capture_default_str();
    pipe_cmd->add_option("--out", pipe_out, "Instance map (.lbm)")->required();
    pipe_cmd->add_option("--solution", pipe_solution, "Also write the solution JSON");
    pipe_cmd->add_option("--spx-out", pipe_spx, "Also write the superpixel map");
    add_solver_options(pipe_cmd, pipe_opt);

    // eval
    fs::path eval_pred, eval_gt, eval_out;
    auto* eval_cmd = app.add_subcommand("eval", "Match predicted instances against ground truth");
    eval_cmd->add_option("--pred", eval_pred)->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--gt", eval_gt)->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--out", eval_out, "Write the report JSON here instead of stdout");

    // gridsearch
    std::vector<fs::path> grid_scenes;
    GridSearchConfig grid_cfg;
    std::string grid_solver = "local";
    int grid_levels = kDefaultQuantizationLevels;
    auto* grid_cmd = app.add_subcommand("gridsearch", "Cross-validated search over (w, beta_small, beta_big)");
    grid_cmd->add_option("--scene", grid_scenes, "Scene directory with semantic.sgm, edge.sgm, gt.lbm")->required();
    grid_cmd->add_option("--w", grid_cfg.w_values)->required()->delimiter(',');
    grid_cmd->add_option("--beta-small", grid_cfg.beta_small_values)->required()->delimiter(',');
    grid_cmd->add_option("--beta-big", grid_cfg.beta_big_values)->required()->delimiter(',');
    grid_cmd->add_option("--big-classes", grid_cfg.base.big_classes)->delimiter(',');
    grid_cmd->add_option("--folds", grid_cfg.folds)->capture_default_str();
    grid_cmd->add_option("--levels", grid_levels)->capture_default_str();
    grid_cmd->add_option("--seed", grid_cfg.base.seed)->capture_default_str();
    grid_cmd->add_option("--solver", grid_solver)->check(CLI::IsMember({"local", "oracle", "crf", "greedy"}));

    // render
    fs::path render_in, render_out;
    auto* render_cmd = app.add_subcommand("render", "PNG visualization of an instance map");
    render_cmd->add_option("--instances", render_in)->required()->check(CLI::ExistingFile);
    render_cmd->add_option("--out", render_out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (*synth_cmd) {
            const SyntheticScene scene = synth(synth_cfg);
            fs::create_directories(synth_dir);
            const SceneFiles files(synth_dir);
            write_sgm(files.semantic, scene.semantic);
            write_sgm(files.edge, scene.edge);
            write_lbm(files.gt, to_label_map(scene.gt));
            std::printf("wrote %s (instances=%d)\n", synth_dir.string().c_str(), scene.gt.instance_count());
        } else if (*spx_cmd) {
            const SuperpixelMap spx = watershed(read_sgm(spx_edge), levels);
            write_lbm(spx_out, to_label_map(spx));
            std::printf("superpixels=%d\n", spx.region_count());
        } else if (*graph_cmd) {
            const RegionGraph g = build_region_graph(to_superpixel_map(read_lbm(graph_spx)), read_sgm(graph_semantic),
                                                     read_sgm(graph_edge));
            write_file(graph_out, graph_to_json(g));
            std::printf("nodes=%d edges=%d labels=%d\n", g.node_count(), g.edge_count(), g.label_count());
        } else if (*solve_cmd) {
            const RegionGraph g = graph_from_json(read_file(solve_graph));
            const SolverKind kind = parse_solver_kind(solve_opt.solver);
            const PairPrior prior = make_pair_prior(solve_opt.params, g.classes());
            const SolveResult r = solve(g, prior, solve_opt.params, kind);
            if (!solve_out.empty()) write_file(solve_out, solve_result_to_json(r, kind));
            print_solve_summary(r, kind);
        } else if (*pipe_cmd) {
            PipelineConfig cfg;
            cfg.quantization_levels = pipe_levels;
            cfg.params = pipe_opt.params;
            cfg.solver = parse_solver_kind(pipe_opt.solver);
            const PipelineResult r = run_pipeline(read_sgm(pipe_semantic), read_sgm(pipe_edge), cfg);
            write_lbm(pipe_out, to_label_map(r.instances));
            if (!pipe_solution.empty()) write_file(pipe_solution, solve_result_to_json(r.result, cfg.solver));
            if (!pipe_spx.empty()) write_lbm(pipe_spx, to_label_map(r.superpixels));
            std::printf("superpixels=%d edges=%d instances=%d\n", r.graph.node_count(), r.graph.edge_count(),
                        r.instances.instance_count());
            print_solve_summary(r.result, cfg.solver);
        } else if (*eval_cmd) {
            const MatchReport report = evaluate(to_instance_map(read_lbm(eval_pred)), to_instance_map(read_lbm(eval_gt)));
            const std::string text = match_report_to_json(report);
            if (eval_out.empty())
                std::cout << text;
            else
                write_file(eval_out, text);
        } else if (*grid_cmd) {
            grid_cfg.solver = parse_solver_kind(grid_solver);
            std::vector<PreparedScene> scenes;
            for (const fs::path& dir : grid_scenes) {
                const SceneFiles files(dir);
                scenes.push_back(prepare_scene(read_sgm(files.semantic), read_sgm(files.edge),
                                               to_instance_map(read_lbm(files.gt)), grid_levels));
            }
            const GridSearchResult r = grid_search(scenes, grid_cfg, [](const GridEvaluation& e) {
                std::printf("eval w=%.17g beta_small=%.17g beta_big=%.17g fold=%d mean_f1=%.17g\n", e.w, e.beta_small,
                            e.beta_big, e.fold, e.mean_f1);
            });
            std::printf("best w=%.17g beta_small=%.17g beta_big=%.17g score=%.17g invocations=%zu\n", r.best.w,
                        r.best.beta_small, r.best.beta_big, r.best_score, r.evaluations.size());
        } else if (*render_cmd) {
            render_instances_png(render_out, to_instance_map(read_lbm(render_in)));
        }
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const InfeasibleError& e) {
        std::fprintf(stderr, "infeasible: %s\n", e.what());
        return kExitSolver;
    } catch (const SolverError& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return kExitSolver;
    } catch (const fs::filesystem_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    }
    return 0;
}
