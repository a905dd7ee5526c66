#pragma once

#include <cstdint>

#include "instancecut/model.hpp"
#include "instancecut/objective.hpp"

namespace instancecut {

struct SynthConfig {
    int height = 128;
    int width = 128;
    int num_instances = 5;
    int num_labels = 8;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    /// Score magnitude: +margin for the true class / boundary, -margin otherwise.
    double margin = 4.0;
    int min_size = 8;
    int max_size = 32;
    int max_attempts = 1000;
};

/// Rectangles and ellipses on a background canvas with noisy score maps.
/// At sigma = 0 the per-pixel semantic argmax is the ground-truth class and
/// the edge map is +margin exactly on ground-truth boundary pixels.
struct SyntheticScene {
    SynthConfig config;
    /// Ground truth: instance ids 1..k in placement order, 0 for background.
    InstanceMap gt;
    ScoreGrid semantic;
    ScoreGrid edge;
};

/// Throws ValidationError when the instances cannot be placed.
SyntheticScene synth(const SynthConfig& config);

}  // namespace instancecut
