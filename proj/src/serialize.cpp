#include "instancecut/serialize.hpp"

#include <png.h>

#include <json.hpp>

namespace instancecut {

using nlohmann::json;

std::string graph_to_json(const RegionGraph& g) {
    json j;
    j["num_labels"] = g.classes().num_labels();
    j["node_count"] = g.node_count();
    json nodes = json::array();
    for (NodeId u = 0; u < g.node_count(); ++u) {
        json row = json::array();
        for (Label l = 0; l < g.label_count(); ++l) row.push_back(g.alpha(u, l));
        nodes.push_back(std::move(row));
    }
    j["node_scores"] = std::move(nodes);
    json edges = json::array();
    for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
    j["edges"] = std::move(edges);
    j["edge_scores"] = std::vector<double>(g.edge_scores().begin(), g.edge_scores().end());
    return j.dump(1) + "\n";
}

RegionGraph graph_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        const ClassSet classes(j.at("num_labels").get<int>());
        const int n = j.at("node_count").get<int>();
        std::vector<double> node_scores;
        const json& nodes = j.at("node_scores");
        if (!nodes.is_array() || nodes.size() != static_cast<std::size_t>(std::max(n, 0)))
            throw ValidationError("graph json: node_scores must have node_count rows");
        for (const json& row : nodes) {
            if (!row.is_array() || row.size() != static_cast<std::size_t>(classes.label_count()))
                throw ValidationError("graph json: node score rows must have L+1 entries");
            for (const json& v : row) node_scores.push_back(v.get<double>());
        }
        std::vector<Edge> edges;
        for (const json& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2) throw ValidationError("graph json: edges must be [u, v] pairs");
            edges.push_back({e[0].get<int>(), e[1].get<int>()});
        }
        return RegionGraph(classes, n, std::move(edges), std::move(node_scores), j.at("edge_scores").get<std::vector<double>>());
    } catch (const json::exception& e) {
        throw ValidationError(std::string("graph json: ") + e.what());
    }
}

std::string solve_result_to_json(const SolveResult& r, SolverKind kind) {
    json j;
    j["solver"] = std::string(to_string(kind));
    j["objective"] = r.objective;
    j["rounds"] = r.rounds;
    j["moves_applied"] = r.moves_applied;
    j["component_of"] = std::vector<int>(r.solution.component_of().begin(), r.solution.component_of().end());
    j["label_of"] = std::vector<int>(r.solution.label_of().begin(), r.solution.label_of().end());
    return j.dump(1) + "\n";
}

JointSolution solution_from_json(const RegionGraph& g, const std::string& text) {
    try {
        const json j = json::parse(text);
        return JointSolution(g, j.at("component_of").get<std::vector<int>>(), j.at("label_of").get<std::vector<int>>());
    } catch (const json::exception& e) {
        throw ValidationError(std::string("solution json: ") + e.what());
    }
}

std::string match_report_to_json(const MatchReport& report) {
    json j;
    j["predicted"] = report.predicted;
    j["ground_truth"] = report.ground_truth;
    j["matched"] = report.matched;
    j["precision"] = report.precision;
    j["recall"] = report.recall;
    j["f1"] = report.f1;
    j["exact_match"] = report.exact_match;
    json classes = json::object();
    for (const auto& [label, c] : report.per_class) {
        classes[std::to_string(label)] = {{"predicted", c.predicted},
                                          {"ground_truth", c.ground_truth},
                                          {"matched", c.matched},
                                          {"precision", c.precision},
                                          {"recall", c.recall}};
    }
    j["per_class"] = std::move(classes);
    j["best_iou"] = report.best_iou;
    return j.dump(1) + "\n";
}

void render_instances_png(const std::filesystem::path& path, const InstanceMap& instances) {
    if (instances.height <= 0 || instances.width <= 0 ||
        instances.instance.size() != static_cast<std::size_t>(instances.height) * instances.width)
        throw ValidationError("render: inconsistent instance map");
    std::vector<png_byte> rgb(instances.instance.size() * 3, 0);
    for (std::size_t p = 0; p < instances.instance.size(); ++p) {
        const std::uint32_t id = instances.instance[p];
        if (id == 0) continue;
        std::uint32_t h = (id * 2654435761u) ^ (static_cast<std::uint32_t>(instances.label[p]) * 40503u);
        h ^= h >> 15;
        h *= 2246822519u;
        h ^= h >> 13;
        // Keep every channel bright enough to stand out from the background.
        rgb[3 * p + 0] = static_cast<png_byte>(64 + (h & 0xbf));
        rgb[3 * p + 1] = static_cast<png_byte>(64 + ((h >> 8) & 0xbf));
        rgb[3 * p + 2] = static_cast<png_byte>(64 + ((h >> 16) & 0xbf));
    }
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(instances.width);
    image.height = static_cast<png_uint_32>(instances.height);
    image.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&image, path.string().c_str(), 0, rgb.data(), 0, nullptr)) {
        const std::string message = image.message;
        png_image_free(&image);
        throw ValidationError("render: " + message);
    }
}

}  // namespace instancecut
