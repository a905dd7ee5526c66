#include "instancecut/synth.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "instancecut/groundtruth.hpp"

namespace instancecut {

namespace {

struct Shape {
    int top, left, h, w;
    bool ellipse;

    bool contains(int r, int c) const {
        if (r < top || r >= top + h || c < left || c >= left + w) return false;
        if (!ellipse) return true;
        const double dy = (r - top + 0.5) / h - 0.5;
        const double dx = (c - left + 0.5) / w - 0.5;
        return dx * dx + dy * dy <= 0.25;
    }
};

// Pixels of the shape whose four neighbors all lie in the shape must form one
// nonempty 4-connected set, so the instance yields exactly one watershed basin.
bool has_connected_interior(const Shape& s) {
    std::vector<char> inner(static_cast<std::size_t>(s.h) * s.w, 0);
    int count = 0;
    std::size_t first = 0;
    for (int r = 0; r < s.h; ++r) {
        for (int c = 0; c < s.w; ++c) {
            const int y = s.top + r;
            const int x = s.left + c;
            if (s.contains(y, x) && s.contains(y - 1, x) && s.contains(y + 1, x) && s.contains(y, x - 1) &&
                s.contains(y, x + 1)) {
                const std::size_t i = static_cast<std::size_t>(r) * s.w + c;
                if (count++ == 0) first = i;
                inner[i] = 1;
            }
        }
    }
    if (count == 0) return false;
    std::vector<std::size_t> stack{first};
    inner[first] = 2;
    int reached = 0;
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        ++reached;
        const int r = static_cast<int>(i / s.w);
        const int c = static_cast<int>(i % s.w);
        auto visit = [&](int rr, int cc) {
            if (rr < 0 || cc < 0 || rr >= s.h || cc >= s.w) return;
            const std::size_t j = static_cast<std::size_t>(rr) * s.w + cc;
            if (inner[j] == 1) {
                inner[j] = 2;
                stack.push_back(j);
            }
        };
        visit(r - 1, c);
        visit(r + 1, c);
        visit(r, c - 1);
        visit(r, c + 1);
    }
    return reached == count;
}

}  // namespace

SyntheticScene synth(const SynthConfig& config) {
    if (config.height <= 0 || config.width <= 0) throw ValidationError("synth: dimensions must be positive");
    if (config.num_instances < 0) throw ValidationError("synth: num_instances must be >= 0");
    if (config.num_labels < 1 || config.num_labels > 255) throw ValidationError("synth: num_labels must be in 1..255");
    if (!(config.sigma >= 0.0)) throw ValidationError("synth: sigma must be >= 0");
    if (config.min_size < 3 || config.max_size < config.min_size)
        throw ValidationError("synth: need 3 <= min_size <= max_size");
    if (config.min_size + 2 > config.height || config.min_size + 2 > config.width)
        throw ValidationError("synth: instances do not fit in the canvas");

    const int h = config.height;
    const int w = config.width;
    const std::size_t pixels = static_cast<std::size_t>(h) * w;
    std::mt19937_64 rng(config.seed);
    auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

    InstanceMap gt;
    gt.height = h;
    gt.width = w;
    gt.instance.assign(pixels, 0);
    gt.label.assign(pixels, 0);

    for (int id = 1; id <= config.num_instances; ++id) {
        bool placed = false;
        for (int attempt = 0; attempt < config.max_attempts && !placed; ++attempt) {
            Shape s;
            // Shapes keep a one-pixel margin from the image border.
            s.h = uniform(config.min_size, std::min(config.max_size, h - 2));
            s.w = uniform(config.min_size, std::min(config.max_size, w - 2));
            s.top = uniform(1, h - s.h - 1);
            s.left = uniform(1, w - s.w - 1);
            s.ellipse = uniform(0, 1) == 1;
            if (!has_connected_interior(s)) continue;
            bool overlaps = false;
            for (int r = s.top; r < s.top + s.h && !overlaps; ++r)
                for (int c = s.left; c < s.left + s.w && !overlaps; ++c)
                    overlaps = s.contains(r, c) && gt.instance[static_cast<std::size_t>(r) * w + c] != 0;
            if (overlaps) continue;
            const auto label = static_cast<std::uint8_t>(uniform(1, config.num_labels));
            for (int r = s.top; r < s.top + s.h; ++r) {
                for (int c = s.left; c < s.left + s.w; ++c) {
                    if (!s.contains(r, c)) continue;
                    gt.instance[static_cast<std::size_t>(r) * w + c] = static_cast<std::uint32_t>(id);
                    gt.label[static_cast<std::size_t>(r) * w + c] = label;
                }
            }
            placed = true;
        }
        if (!placed)
            throw ValidationError("synth: could not place instance " + std::to_string(id) + " after " +
                                  std::to_string(config.max_attempts) + " attempts");
    }

    const BoundaryGT boundary = derive_boundary_gt(InstanceIdMap{h, w, gt.instance});
    std::normal_distribution<double> noise(0.0, 1.0);
    auto jitter = [&]() { return config.sigma > 0.0 ? config.sigma * noise(rng) : 0.0; };

    const int channels = config.num_labels + 1;
    std::vector<float> semantic(pixels * channels);
    for (std::size_t p = 0; p < pixels; ++p)
        for (int l = 0; l < channels; ++l)
            semantic[p * channels + l] =
                static_cast<float>((l == gt.label[p] ? config.margin : -config.margin) + jitter());
    std::vector<float> edge(pixels);
    for (std::size_t p = 0; p < pixels; ++p)
        edge[p] = static_cast<float>((boundary.labels[p] == BoundaryLabel::edge ? config.margin : -config.margin) + jitter());

    return SyntheticScene{config, std::move(gt), ScoreGrid(h, w, channels, std::move(semantic)),
                          ScoreGrid(h, w, 1, std::move(edge))};
}

}  // namespace instancecut
