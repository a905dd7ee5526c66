#include "instancecut/pixel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

namespace instancecut {

namespace {

template <class Fn>
void for_each_neighbor(std::size_t p, int height, int width, Fn&& fn) {
    const int row = static_cast<int>(p / width);
    const int col = static_cast<int>(p % width);
    if (row > 0) fn(p - width);
    if (col > 0) fn(p - 1);
    if (col + 1 < width) fn(p + 1);
    if (row + 1 < height) fn(p + width);
}

}  // namespace

std::vector<std::int32_t> quantize_edges(const ScoreGrid& edge_map, int levels) {
    if (edge_map.channels() != 1) throw ValidationError("watershed: edge map must have exactly 1 channel");
    if (levels < 2) throw ValidationError("watershed: quantization_levels must be >= 2");
    const auto values = edge_map.values();
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double min = *lo;
    const double range = static_cast<double>(*hi) - min;
    std::vector<std::int32_t> q(values.size(), 0);
    if (range <= 0.0) return q;
    const double scale = (levels - 1) / range;
    for (std::size_t i = 0; i < values.size(); ++i)
        q[i] = static_cast<std::int32_t>(std::lround((values[i] - min) * scale));
    return q;
}

SuperpixelMap watershed(const ScoreGrid& edge_map, int quantization_levels) {
    const std::vector<std::int32_t> level = quantize_edges(edge_map, quantization_levels);
    const int height = edge_map.height();
    const int width = edge_map.width();
    const std::size_t n = level.size();

    // Plateaus (4-connected equal-level sets); a plateau with no lower
    // neighbor anywhere on its border is a regional minimum and becomes a seed.
    std::vector<std::int32_t> label(n, -1);
    std::vector<std::size_t> stack;
    std::vector<std::size_t> plateau;
    int seeds = 0;
    std::vector<char> visited(n, 0);
    for (std::size_t s = 0; s < n; ++s) {
        if (visited[s]) continue;
        plateau.clear();
        bool minimum = true;
        visited[s] = 1;
        stack.push_back(s);
        while (!stack.empty()) {
            const std::size_t p = stack.back();
            stack.pop_back();
            plateau.push_back(p);
            for_each_neighbor(p, height, width, [&](std::size_t q) {
                if (level[q] < level[p]) minimum = false;
                if (level[q] == level[p] && !visited[q]) {
                    visited[q] = 1;
                    stack.push_back(q);
                }
            });
        }
        if (minimum) {
            for (std::size_t p : plateau) label[p] = seeds;
            ++seeds;
        }
    }

    // (level, insertion sequence, pixel) min-queue.
    using Entry = std::tuple<std::int32_t, std::uint64_t, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    std::vector<std::int32_t> pending(n, -1);
    std::uint64_t sequence = 0;
    auto enqueue_neighbors = [&](std::size_t p) {
        for_each_neighbor(p, height, width, [&](std::size_t q) {
            if (label[q] >= 0 || pending[q] >= 0) return;
            pending[q] = label[p];
            queue.emplace(level[q], sequence++, q);
        });
    };
    for (std::size_t p = 0; p < n; ++p)
        if (label[p] >= 0) enqueue_neighbors(p);
    while (!queue.empty()) {
        const std::size_t p = std::get<2>(queue.top());
        queue.pop();
        label[p] = pending[p];
        enqueue_neighbors(p);
    }

    std::vector<std::int32_t> remap(seeds, -1);
    std::int32_t next = 0;
    for (std::int32_t& l : label) {
        if (remap[l] < 0) remap[l] = next++;
        l = remap[l];
    }
    return SuperpixelMap(height, width, std::move(label));
}

ScoreGrid derive_background(const ScoreGrid& semantic_full, std::span<const int> instance_channels) {
    const int channels = semantic_full.channels();
    if (instance_channels.empty()) throw ValidationError("derive_background: instance class set is empty");
    std::vector<char> is_instance(channels, 0);
    for (int c : instance_channels) {
        if (c < 0 || c >= channels) throw ValidationError("derive_background: instance channel out of range");
        if (is_instance[c]) throw ValidationError("derive_background: duplicate instance channel");
        is_instance[c] = 1;
    }
    if (static_cast<int>(instance_channels.size()) >= channels)
        throw ValidationError("derive_background: instance classes must leave at least one background channel");

    const int out_channels = static_cast<int>(instance_channels.size()) + 1;
    std::vector<float> out(semantic_full.pixel_count() * out_channels);
    for (std::size_t p = 0; p < semantic_full.pixel_count(); ++p) {
        float bg = -std::numeric_limits<float>::infinity();
        for (int c = 0; c < channels; ++c)
            if (!is_instance[c]) bg = std::max(bg, semantic_full.at(p, c));
        float* dst = &out[p * out_channels];
        dst[0] = bg;
        for (std::size_t i = 0; i < instance_channels.size(); ++i) dst[i + 1] = semantic_full.at(p, instance_channels[i]);
    }
    return ScoreGrid(semantic_full.height(), semantic_full.width(), out_channels, std::move(out));
}

double sigmoid_edge_probability(double score) {
    if (score >= 0.0) return 1.0 / (1.0 + std::exp(-score));
    const double e = std::exp(score);
    return e / (1.0 + e);
}

}  // namespace instancecut
