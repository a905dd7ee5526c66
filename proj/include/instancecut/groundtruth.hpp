#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "instancecut/errors.hpp"

namespace instancecut {

enum class BoundaryLabel : std::uint8_t { non_edge = 0, edge = 1, ignore = 2 };

/// Row-major H x W map of instance ids; 0 is background.
struct InstanceIdMap {
    int height = 0;
    int width = 0;
    std::vector<std::uint32_t> ids;

    void validate() const;
};

struct BoundaryGT {
    int height = 0;
    int width = 0;
    std::vector<BoundaryLabel> labels;

    std::size_t count(BoundaryLabel l) const;
};

inline constexpr double kLossClampEpsilon = 1e-12;
inline constexpr int kDefaultPruneRadius = 32;

/// EDGE where a 4-neighbor has a different id and at least one of the two
/// pixels is not background. Both sides of a boundary are marked.
BoundaryGT derive_boundary_gt(const InstanceIdMap& instances);

/// NON_EDGE pixels farther than `radius` (Chebyshev) from every instance
/// pixel become IGNORE. EDGE pixels are kept.
BoundaryGT prune_gt(const BoundaryGT& gt, const InstanceIdMap& instances, int radius);

/// Weighted negative log-likelihood, -([y=1] log p + alpha [y=0] log(1-p)),
/// with p clamped to [eps, 1-eps].
double balanced_loss(double p_edge, int y_gt, double alpha);

/// N_edge / N_non_edge over the non-ignored pixels.
double balance_coefficient(const BoundaryGT& gt);

}  // namespace instancecut
