#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "instancecut/model.hpp"

namespace instancecut {

inline constexpr int kDefaultQuantizationLevels = 256;

/// Affine rescale to integer levels 0..levels-1 (rounded). Constant maps
/// quantize to all zeros.
std::vector<std::int32_t> quantize_edges(const ScoreGrid& edge_map, int levels);

/// Seeded flooding over the quantized edge map. Seeds are the 4-connected
/// regional-minimum plateaus; pixels flood in (level, insertion order) and
/// take the label of the neighbor that enqueued them. No watershed lines.
/// Region ids are ordered by their first pixel in raster order.
SuperpixelMap watershed(const ScoreGrid& edge_map, int quantization_levels = kDefaultQuantizationLevels);

/// Collapses a full semantic grid to [background, instance classes...].
/// Background is the per-pixel max over every channel not listed.
ScoreGrid derive_background(const ScoreGrid& semantic_full, std::span<const int> instance_channels);

/// Logistic conversion of an edge log-odds score to a probability.
double sigmoid_edge_probability(double score);

}  // namespace instancecut
