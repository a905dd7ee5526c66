#pragma once

#include <filesystem>
#include <string>

#include "instancecut/evaluate.hpp"
#include "instancecut/model.hpp"
#include "instancecut/solvers.hpp"

namespace instancecut {

/// JSON graph dump: {"num_labels", "node_count", "node_scores": [[...]], "edges": [[u, v]], "edge_scores": [...]}.
std::string graph_to_json(const RegionGraph& g);
RegionGraph graph_from_json(const std::string& text);

std::string solve_result_to_json(const SolveResult& r, SolverKind kind);
/// Reads component_of / label_of back and validates them against `g`.
JointSolution solution_from_json(const RegionGraph& g, const std::string& text);

std::string match_report_to_json(const MatchReport& report);

/// RGB PNG of an instance map; background is black and each instance gets a
/// deterministic color derived from its id and class.
void render_instances_png(const std::filesystem::path& path, const InstanceMap& instances);

}  // namespace instancecut
