#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "instancecut/evaluate.hpp"
#include "instancecut/groundtruth.hpp"
#include "instancecut/io.hpp"
#include "instancecut/objective.hpp"
#include "instancecut/pipeline.hpp"
#include "instancecut/pixel.hpp"
#include "instancecut/solvers.hpp"
#include "instancecut/synth.hpp"

namespace py = pybind11;
using namespace instancecut;

namespace {

template <class T>
using CArray = py::array_t<T, py::array::c_style | py::array::forcecast>;

template <class T>
py::array_t<T> to_array(const std::vector<T>& v, std::vector<py::ssize_t> shape) {
    py::array_t<T> out(shape);
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

// (H, W) or (H, W, C) float array to a ScoreGrid.
ScoreGrid to_grid(const CArray<float>& a) {
    if (a.ndim() != 2 && a.ndim() != 3) throw ValidationError("score grid must be a 2-D or 3-D array");
    const int h = static_cast<int>(a.shape(0)), w = static_cast<int>(a.shape(1));
    const int c = a.ndim() == 3 ? static_cast<int>(a.shape(2)) : 1;
    return ScoreGrid(h, w, c, std::vector<float>(a.data(), a.data() + a.size()));
}

py::array_t<float> from_grid(const ScoreGrid& g) {
    std::vector<float> v(g.values().begin(), g.values().end());
    if (g.channels() == 1) return to_array(v, {g.height(), g.width()});
    return to_array(v, {g.height(), g.width(), g.channels()});
}

template <class T>
std::vector<T> flat(const CArray<T>& a, int height, int width, const char* what) {
    if (a.ndim() != 2 || a.shape(0) != height || a.shape(1) != width)
        throw ValidationError(std::string(what) + " must be an (H, W) array matching the other inputs");
    return std::vector<T>(a.data(), a.data() + a.size());
}

SuperpixelMap to_superpixels(const CArray<std::int32_t>& a) {
    if (a.ndim() != 2) throw ValidationError("superpixel map must be a 2-D array");
    const int h = static_cast<int>(a.shape(0)), w = static_cast<int>(a.shape(1));
    return SuperpixelMap(h, w, flat(a, h, w, "superpixel map"));
}

InstanceMap to_instances(const CArray<std::uint32_t>& ids, const CArray<std::uint8_t>& labels) {
    if (ids.ndim() != 2) throw ValidationError("instance map must be a 2-D array");
    const int h = static_cast<int>(ids.shape(0)), w = static_cast<int>(ids.shape(1));
    return {h, w, flat(ids, h, w, "instance ids"), flat(labels, h, w, "instance labels")};
}

py::tuple from_instances(const InstanceMap& m) {
    return py::make_tuple(to_array(m.instance, {m.height, m.width}), to_array(m.label, {m.height, m.width}));
}

RegionGraph make_graph(int num_labels, const CArray<std::int32_t>& edges, const CArray<double>& node_scores,
                       const CArray<double>& edge_scores) {
    if (node_scores.ndim() != 2 || node_scores.shape(1) != num_labels + 1)
        throw ValidationError("node_scores must have shape (node_count, num_labels + 1)");
    if (edges.size() > 0 && (edges.ndim() != 2 || edges.shape(1) != 2))
        throw ValidationError("edges must have shape (edge_count, 2)");
    std::vector<Edge> e(edges.size() / 2);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = {edges.data()[2 * i], edges.data()[2 * i + 1]};
    return RegionGraph(ClassSet(num_labels), static_cast<int>(node_scores.shape(0)), std::move(e),
                       std::vector<double>(node_scores.data(), node_scores.data() + node_scores.size()),
                       std::vector<double>(edge_scores.data(), edge_scores.data() + edge_scores.size()));
}

py::dict result_dict(const SolveResult& r) {
    py::dict d;
    d["component_of"] = to_array(std::vector<int>(r.solution.component_of().begin(), r.solution.component_of().end()),
                                 {static_cast<py::ssize_t>(r.solution.component_of().size())});
    d["label_of"] = to_array(std::vector<int>(r.solution.label_of().begin(), r.solution.label_of().end()),
                             {static_cast<py::ssize_t>(r.solution.label_of().size())});
    d["objective"] = r.objective;
    d["rounds"] = r.rounds;
    d["moves_applied"] = r.moves_applied;
    d["wall_time"] = r.wall_time.count();
    d["objective_trace"] = r.objective_trace;
    return d;
}

py::dict report_dict(const MatchReport& r) {
    py::dict d;
    d["predicted"] = r.predicted;
    d["ground_truth"] = r.ground_truth;
    d["matched"] = r.matched;
    d["precision"] = r.precision;
    d["recall"] = r.recall;
    d["f1"] = r.f1;
    d["exact_match"] = r.exact_match;
    d["best_iou"] = r.best_iou;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Joint instance labeling and partitioning of superpixel graphs";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

    py::class_<SolverParams>(m, "SolverParams")
        .def(py::init<>())
        .def_readwrite("w", &SolverParams::w)
        .def_readwrite("beta_small", &SolverParams::beta_small)
        .def_readwrite("beta_big", &SolverParams::beta_big)
        .def_readwrite("big_classes", &SolverParams::big_classes)
        .def_readwrite("max_rounds", &SolverParams::max_rounds)
        .def_readwrite("seed", &SolverParams::seed)
        .def_readwrite("restarts", &SolverParams::restarts)
        .def_readwrite("verify_incremental", &SolverParams::verify_incremental);

    py::class_<RegionGraph>(m, "RegionGraph")
        .def(py::init(&make_graph), py::arg("num_labels"), py::arg("edges"), py::arg("node_scores"),
             py::arg("edge_scores"))
        .def_property_readonly("num_labels", [](const RegionGraph& g) { return g.classes().num_labels(); })
        .def_property_readonly("node_count", &RegionGraph::node_count)
        .def_property_readonly("edge_count", &RegionGraph::edge_count)
        .def_property_readonly("edges",
                               [](const RegionGraph& g) {
                                   std::vector<std::int32_t> v;
                                   for (const Edge& e : g.edges()) v.insert(v.end(), {e.u, e.v});
                                   return to_array(v, {g.edge_count(), 2});
                               })
        .def_property_readonly("node_scores",
                               [](const RegionGraph& g) {
                                   return to_array(std::vector<double>(g.node_scores().begin(), g.node_scores().end()),
                                                   {g.node_count(), g.label_count()});
                               })
        .def_property_readonly("edge_scores", [](const RegionGraph& g) {
            return to_array(std::vector<double>(g.edge_scores().begin(), g.edge_scores().end()), {g.edge_count()});
        });

    py::class_<PairPrior>(m, "PairPrior")
        .def(py::init([](const CArray<double>& beta) {
                 if (beta.ndim() != 2 || beta.shape(0) != beta.shape(1) || beta.shape(0) < 2)
                     throw ValidationError("beta must be a square (L+1, L+1) array with L >= 1");
                 return PairPrior(ClassSet(static_cast<int>(beta.shape(0)) - 1),
                                  std::vector<double>(beta.data(), beta.data() + beta.size()));
             }),
             py::arg("beta"))
        .def("beta", &PairPrior::beta, py::arg("a"), py::arg("b"));

    m.def(
        "make_pair_prior",
        [](const SolverParams& params, int num_labels) { return make_pair_prior(params, ClassSet(num_labels)); },
        py::arg("params"), py::arg("num_labels"));

    m.def(
        "synth",
        [](int height, int width, int num_instances, int num_labels, double sigma, std::uint64_t seed, int min_size,
           int max_size, double margin) {
            SynthConfig c;
            c.height = height;
            c.width = width;
            c.num_instances = num_instances;
            c.num_labels = num_labels;
            c.sigma = sigma;
            c.seed = seed;
            c.min_size = min_size;
            c.max_size = max_size;
            c.margin = margin;
            const SyntheticScene s = synth(c);
            py::dict d;
            d["semantic"] = from_grid(s.semantic);
            d["edge"] = from_grid(s.edge);
            d["gt_instances"] = to_array(s.gt.instance, {s.gt.height, s.gt.width});
            d["gt_labels"] = to_array(s.gt.label, {s.gt.height, s.gt.width});
            return d;
        },
        py::arg("height") = 128, py::arg("width") = 128, py::arg("num_instances") = 5, py::arg("num_labels") = 8,
        py::arg("sigma") = 0.0, py::arg("seed") = 0, py::arg("min_size") = 8, py::arg("max_size") = 32, py::arg("margin") = 4.0);

    m.def(
        "watershed",
        [](const CArray<float>& edge, int levels) {
            const SuperpixelMap spx = watershed(to_grid(edge), levels);
            return to_array(std::vector<std::int32_t>(spx.regions().begin(), spx.regions().end()),
                            {spx.height(), spx.width()});
        },
        py::arg("edge"), py::arg("levels") = kDefaultQuantizationLevels);

    m.def(
        "build_region_graph",
        [](const CArray<std::int32_t>& spx, const CArray<float>& semantic, const CArray<float>& edge) {
            return build_region_graph(to_superpixels(spx), to_grid(semantic), to_grid(edge));
        },
        py::arg("superpixels"), py::arg("semantic"), py::arg("edge"));

    m.def(
        "derive_background",
        [](const CArray<float>& semantic, const std::vector<int>& instance_channels) {
            return from_grid(derive_background(to_grid(semantic), instance_channels));
        },
        py::arg("semantic"), py::arg("instance_channels"));

    m.def(
        "solve",
        [](const RegionGraph& g, const PairPrior& prior, const SolverParams& params, const std::string& solver) {
            return result_dict(solve(g, prior, params, parse_solver_kind(solver)));
        },
        py::arg("graph"), py::arg("prior"), py::arg("params") = SolverParams{}, py::arg("solver") = "local");

    m.def(
        "joint_objective",
        [](const RegionGraph& g, const PairPrior& prior, double w, const std::vector<int>& component_of,
           const std::vector<int>& label_of) { return joint_objective(g, prior, w, JointSolution(g, component_of, label_of)); },
        py::arg("graph"), py::arg("prior"), py::arg("w"), py::arg("component_of"), py::arg("label_of"));

    m.def(
        "crf_solve",
        [](const RegionGraph& g, const PairPrior& prior, double pairwise_weight) {
            return crf_solve(g, prior, pairwise_weight);
        },
        py::arg("graph"), py::arg("prior"), py::arg("pairwise_weight") = 1.0);

    m.def(
        "run_pipeline",
        [](const CArray<float>& semantic, const CArray<float>& edge, const SolverParams& params, int levels,
           const std::string& solver) {
            PipelineConfig config;
            config.params = params;
            config.quantization_levels = levels;
            config.solver = parse_solver_kind(solver);
            const PipelineResult r = run_pipeline(to_grid(semantic), to_grid(edge), config);
            py::dict d = result_dict(r.result);
            d["superpixels"] = to_array(std::vector<std::int32_t>(r.superpixels.regions().begin(), r.superpixels.regions().end()),
                                        {r.superpixels.height(), r.superpixels.width()});
            d["instances"] = to_array(r.instances.instance, {r.instances.height, r.instances.width});
            d["labels"] = to_array(r.instances.label, {r.instances.height, r.instances.width});
            return d;
        },
        py::arg("semantic"), py::arg("edge"), py::arg("params") = SolverParams{},
        py::arg("levels") = kDefaultQuantizationLevels, py::arg("solver") = "local");

    m.def(
        "evaluate",
        [](const CArray<std::uint32_t>& pred_ids, const CArray<std::uint8_t>& pred_labels,
           const CArray<std::uint32_t>& gt_ids, const CArray<std::uint8_t>& gt_labels) {
            return report_dict(evaluate(to_instances(pred_ids, pred_labels), to_instances(gt_ids, gt_labels)));
        },
        py::arg("pred_instances"), py::arg("pred_labels"), py::arg("gt_instances"), py::arg("gt_labels"));

    m.def(
        "derive_boundary_gt",
        [](const CArray<std::uint32_t>& ids) {
            if (ids.ndim() != 2) throw ValidationError("instance map must be a 2-D array");
            const int h = static_cast<int>(ids.shape(0)), w = static_cast<int>(ids.shape(1));
            const BoundaryGT gt = derive_boundary_gt({h, w, flat(ids, h, w, "instance ids")});
            std::vector<std::uint8_t> v(gt.labels.size());
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<std::uint8_t>(gt.labels[i]);
            return to_array(v, {h, w});
        },
        py::arg("instances"));

    m.def("balanced_loss", &balanced_loss, py::arg("p_edge"), py::arg("y_gt"), py::arg("alpha"));

    m.def(
        "read_sgm", [](const std::filesystem::path& path) { return from_grid(read_sgm(path)); }, py::arg("path"));
    m.def(
        "write_sgm", [](const std::filesystem::path& path, const CArray<float>& grid) { write_sgm(path, to_grid(grid)); },
        py::arg("path"), py::arg("grid"));
    m.def(
        "read_instances",
        [](const std::filesystem::path& path) { return from_instances(to_instance_map(read_lbm(path))); },
        py::arg("path"));
    m.def(
        "write_instances",
        [](const std::filesystem::path& path, const CArray<std::uint32_t>& ids, const CArray<std::uint8_t>& labels) {
            write_lbm(path, to_label_map(to_instances(ids, labels)));
        },
        py::arg("path"), py::arg("instances"), py::arg("labels"));
}
