#include <string>

#include "instancecut/solvers.hpp"

namespace instancecut {

SolverKind parse_solver_kind(std::string_view name) {
    if (name == "local") return SolverKind::local;
    if (name == "oracle") return SolverKind::oracle;
    if (name == "crf") return SolverKind::crf;
    if (name == "greedy") return SolverKind::greedy;
    throw ValidationError("unknown solver '" + std::string(name) + "' (expected local|oracle|crf|greedy)");
}

std::string_view to_string(SolverKind kind) {
    switch (kind) {
        case SolverKind::local: return "local";
        case SolverKind::oracle: return "oracle";
        case SolverKind::crf: return "crf";
        case SolverKind::greedy: return "greedy";
    }
    return "local";
}

SolveResult solve(const RegionGraph& g, const PairPrior& prior, const SolverParams& params, SolverKind kind) {
    switch (kind) {
        case SolverKind::oracle: return oracle_exact(g, prior, params);
        case SolverKind::crf: return crf_baseline(g, prior, params);
        case SolverKind::greedy: return two_stage_baseline(g, prior, params);
        case SolverKind::local: break;
    }
    return joint_local_search(g, prior, params);
}

}  // namespace instancecut
