#include "instancecut/evaluate.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace instancecut {

namespace {

struct Instances {
    std::map<std::uint32_t, std::size_t> area;
    std::map<std::uint32_t, int> label;
};

Instances collect(const InstanceMap& m) {
    Instances out;
    for (std::size_t p = 0; p < m.instance.size(); ++p) {
        const std::uint32_t id = m.instance[p];
        if (id == 0) continue;
        if (out.area[id]++ == 0) out.label[id] = m.label[p];
    }
    return out;
}

double ratio(int num, int den) { return den == 0 ? 1.0 : static_cast<double>(num) / den; }

}  // namespace

MatchReport evaluate(const InstanceMap& pred, const InstanceMap& gt) {
    if (pred.height != gt.height || pred.width != gt.width || pred.instance.size() != gt.instance.size() ||
        pred.label.size() != pred.instance.size() || gt.label.size() != gt.instance.size())
        throw ValidationError("evaluate: prediction and ground truth dimensions differ");

    const Instances p = collect(pred);
    const Instances g = collect(gt);
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> overlap;
    for (std::size_t i = 0; i < pred.instance.size(); ++i)
        if (pred.instance[i] != 0 && gt.instance[i] != 0) ++overlap[{pred.instance[i], gt.instance[i]}];

    MatchReport report;
    std::map<std::uint32_t, double> best;
    for (const auto& [id, area] : g.area) best[id] = 0.0;

    // (-iou, pred id, gt id) so that ascending order is descending IoU.
    std::vector<std::tuple<double, std::uint32_t, std::uint32_t>> candidates;
    for (const auto& [key, inter] : overlap) {
        const auto [pid, gid] = key;
        const double iou = static_cast<double>(inter) / static_cast<double>(p.area.at(pid) + g.area.at(gid) - inter);
        best[gid] = std::max(best[gid], iou);
        if (iou >= kMatchIoU && p.label.at(pid) == g.label.at(gid)) candidates.emplace_back(-iou, pid, gid);
    }
    std::sort(candidates.begin(), candidates.end());

    std::set<std::uint32_t> used_pred, used_gt;
    for (const auto& [neg_iou, pid, gid] : candidates) {
        if (used_pred.count(pid) || used_gt.count(gid)) continue;
        used_pred.insert(pid);
        used_gt.insert(gid);
        ++report.per_class[g.label.at(gid)].matched;
    }

    for (const auto& [id, l] : p.label) ++report.per_class[l].predicted;
    for (const auto& [id, l] : g.label) ++report.per_class[l].ground_truth;
    for (auto& [l, c] : report.per_class) {
        c.precision = ratio(c.matched, c.predicted);
        c.recall = ratio(c.matched, c.ground_truth);
    }

    report.predicted = static_cast<int>(p.area.size());
    report.ground_truth = static_cast<int>(g.area.size());
    report.matched = static_cast<int>(used_pred.size());
    report.precision = ratio(report.matched, report.predicted);
    report.recall = ratio(report.matched, report.ground_truth);
    const double sum = report.precision + report.recall;
    report.f1 = sum > 0.0 ? 2.0 * report.precision * report.recall / sum : 0.0;
    report.exact_match = report.matched == report.predicted && report.matched == report.ground_truth;
    for (const auto& [id, iou] : best) report.best_iou.push_back(iou);
    return report;
}

}  // namespace instancecut
