#include "instancecut/groundtruth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace instancecut {

void InstanceIdMap::validate() const {
    if (height <= 0 || width <= 0) throw ValidationError("instance map: dimensions must be positive");
    if (ids.size() != static_cast<std::size_t>(height) * width) throw ValidationError("instance map: size does not match H*W");
}

std::size_t BoundaryGT::count(BoundaryLabel l) const { return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), l)); }

BoundaryGT derive_boundary_gt(const InstanceIdMap& instances) {
    instances.validate();
    const int h = instances.height;
    const int w = instances.width;
    BoundaryGT gt{h, w, std::vector<BoundaryLabel>(instances.ids.size(), BoundaryLabel::non_edge)};
    auto mark = [&](std::size_t p, std::size_t q) {
        const std::uint32_t a = instances.ids[p];
        const std::uint32_t b = instances.ids[q];
        if (a == b || (a == 0 && b == 0)) return;
        gt.labels[p] = BoundaryLabel::edge;
        gt.labels[q] = BoundaryLabel::edge;
    };
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const std::size_t p = static_cast<std::size_t>(r) * w + c;
            if (c + 1 < w) mark(p, p + 1);
            if (r + 1 < h) mark(p, p + w);
        }
    }
    return gt;
}

BoundaryGT prune_gt(const BoundaryGT& gt, const InstanceIdMap& instances, int radius) {
    instances.validate();
    if (radius < 0) throw ValidationError("prune_gt: radius must be >= 0");
    if (gt.height != instances.height || gt.width != instances.width || gt.labels.size() != instances.ids.size())
        throw ValidationError("prune_gt: dimensions differ");

    // Two-pass chamfer transform with unit 8-neighbor steps is exact for L-infinity.
    const int h = gt.height;
    const int w = gt.width;
    constexpr int kFar = std::numeric_limits<int>::max() / 2;
    std::vector<int> dist(instances.ids.size());
    for (std::size_t p = 0; p < dist.size(); ++p) dist[p] = instances.ids[p] != 0 ? 0 : kFar;
    auto at = [&](int r, int c) -> int& { return dist[static_cast<std::size_t>(r) * w + c]; };
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            int& d = at(r, c);
            if (c > 0) d = std::min(d, at(r, c - 1) + 1);
            if (r > 0) {
                d = std::min(d, at(r - 1, c) + 1);
                if (c > 0) d = std::min(d, at(r - 1, c - 1) + 1);
                if (c + 1 < w) d = std::min(d, at(r - 1, c + 1) + 1);
            }
        }
    }
    for (int r = h - 1; r >= 0; --r) {
        for (int c = w - 1; c >= 0; --c) {
            int& d = at(r, c);
            if (c + 1 < w) d = std::min(d, at(r, c + 1) + 1);
            if (r + 1 < h) {
                d = std::min(d, at(r + 1, c) + 1);
                if (c > 0) d = std::min(d, at(r + 1, c - 1) + 1);
                if (c + 1 < w) d = std::min(d, at(r + 1, c + 1) + 1);
            }
        }
    }

    BoundaryGT out = gt;
    for (std::size_t p = 0; p < out.labels.size(); ++p)
        if (out.labels[p] == BoundaryLabel::non_edge && dist[p] > radius) out.labels[p] = BoundaryLabel::ignore;
    return out;
}

double balanced_loss(double p_edge, int y_gt, double alpha) {
    if (y_gt != 0 && y_gt != 1) throw ValidationError("balanced_loss: y_gt must be 0 or 1");
    if (std::isnan(p_edge)) throw ValidationError("balanced_loss: p_edge is NaN");
    const double p = std::clamp(p_edge, kLossClampEpsilon, 1.0 - kLossClampEpsilon);
    return y_gt == 1 ? -std::log(p) : -alpha * std::log1p(-p);
}

double balance_coefficient(const BoundaryGT& gt) {
    const std::size_t edges = gt.count(BoundaryLabel::edge);
    const std::size_t non_edges = gt.count(BoundaryLabel::non_edge);
    if (edges == 0 || non_edges == 0) throw ValidationError("balance_coefficient: both classes must be present");
    return static_cast<double>(edges) / static_cast<double>(non_edges);
}

}  // namespace instancecut
