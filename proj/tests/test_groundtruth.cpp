#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "instancecut/groundtruth.hpp"
#include "instancecut/synth.hpp"
#include "oracles.hpp"

using namespace instancecut;

namespace {

InstanceIdMap random_instance_map(std::mt19937_64& rng, int h, int w) {
    // A few random rectangles painted over each other; ids may touch.
    InstanceIdMap m{h, w, std::vector<std::uint32_t>(static_cast<std::size_t>(h) * w, 0)};
    const int count = oracle::uniform_int(rng, 0, 6);
    for (int id = 1; id <= count; ++id) {
        const int r0 = oracle::uniform_int(rng, 0, h - 1), c0 = oracle::uniform_int(rng, 0, w - 1);
        const int r1 = oracle::uniform_int(rng, r0, h - 1), c1 = oracle::uniform_int(rng, c0, w - 1);
        for (int r = r0; r <= r1; ++r)
            for (int c = c0; c <= c1; ++c) m.ids[r * w + c] = static_cast<std::uint32_t>(id);
    }
    return m;
}

}  // namespace

TEST(DeriveBoundaryGT, UniformBackground) {
    const BoundaryGT gt = derive_boundary_gt(InstanceIdMap{3, 4, std::vector<std::uint32_t>(12, 0)});
    EXPECT_EQ(gt.count(BoundaryLabel::non_edge), 12u);
}

TEST(DeriveBoundaryGT, SmallSquareInBackground) {
    InstanceIdMap m{4, 4, std::vector<std::uint32_t>(16, 0)};
    for (int r = 1; r <= 2; ++r)
        for (int c = 1; c <= 2; ++c) m.ids[r * 4 + c] = 1;
    const BoundaryGT gt = derive_boundary_gt(m);
    EXPECT_EQ(gt.count(BoundaryLabel::edge), 12u);
    // Corners are only diagonal neighbors of the square.
    for (int p : {0, 3, 12, 15}) EXPECT_EQ(gt.labels[p], BoundaryLabel::non_edge);
}

TEST(DeriveBoundaryGT, SharedBorderMarksBothSides) {
    // ids: 1 1 2 2
    const BoundaryGT gt = derive_boundary_gt(InstanceIdMap{1, 4, {1, 1, 2, 2}});
    EXPECT_EQ(gt.labels,
              (std::vector<BoundaryLabel>{BoundaryLabel::non_edge, BoundaryLabel::edge, BoundaryLabel::edge,
                                          BoundaryLabel::non_edge}));
}

TEST(DeriveBoundaryGT, MatchesNeighborhoodEnumeration) {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 50; ++trial) {
        const InstanceIdMap m = random_instance_map(rng, 16, 16);
        const BoundaryGT gt = derive_boundary_gt(m);
        EXPECT_EQ(gt.labels, oracle::boundary_by_neighborhood(m.ids, 16, 16));
    }
}

TEST(DeriveBoundaryGT, Symmetric) {
    std::mt19937_64 rng(52);
    for (int trial = 0; trial < 30; ++trial) {
        const InstanceIdMap m = random_instance_map(rng, 12, 10);
        const BoundaryGT gt = derive_boundary_gt(m);
        for (int r = 0; r < 12; ++r) {
            for (int c = 0; c < 10; ++c) {
                const std::uint32_t a = m.ids[r * 10 + c];
                if (c + 1 < 10) {
                    const std::uint32_t b = m.ids[r * 10 + c + 1];
                    if (a != b && (a != 0 || b != 0)) {
                        EXPECT_EQ(gt.labels[r * 10 + c], BoundaryLabel::edge);
                        EXPECT_EQ(gt.labels[r * 10 + c + 1], BoundaryLabel::edge);
                    }
                }
                // Every EDGE pixel has a differing 4-neighbor.
                if (gt.labels[r * 10 + c] == BoundaryLabel::edge) {
                    bool differs = false;
                    if (r > 0) differs |= m.ids[(r - 1) * 10 + c] != a;
                    if (r < 11) differs |= m.ids[(r + 1) * 10 + c] != a;
                    if (c > 0) differs |= m.ids[r * 10 + c - 1] != a;
                    if (c < 9) differs |= m.ids[r * 10 + c + 1] != a;
                    EXPECT_TRUE(differs);
                }
            }
        }
    }
}

TEST(DeriveBoundaryGT, Validation) {
    EXPECT_THROW(derive_boundary_gt(InstanceIdMap{2, 2, {0, 0, 0}}), ValidationError);
    EXPECT_THROW(derive_boundary_gt(InstanceIdMap{0, 2, {}}), ValidationError);
}

TEST(PruneGT, RadiusZeroKeepsOnlyInstanceNonEdges) {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 20; ++trial) {
        const InstanceIdMap m = random_instance_map(rng, 10, 10);
        const BoundaryGT pruned = prune_gt(derive_boundary_gt(m), m, 0);
        for (std::size_t p = 0; p < m.ids.size(); ++p)
            if (pruned.labels[p] == BoundaryLabel::non_edge) {
                EXPECT_NE(m.ids[p], 0u);
            }
    }
}

TEST(PruneGT, SaturatingRadiusIntroducesNoIgnore) {
    InstanceIdMap m{20, 30, std::vector<std::uint32_t>(600, 0)};
    m.ids[0] = 1;
    const BoundaryGT pruned = prune_gt(derive_boundary_gt(m), m, 37);
    EXPECT_EQ(pruned.count(BoundaryLabel::ignore), 0u);
}

TEST(PruneGT, ChebyshevDistanceAndNoFlips) {
    std::mt19937_64 rng(54);
    for (int trial = 0; trial < 30; ++trial) {
        const InstanceIdMap m = random_instance_map(rng, 14, 17);
        const BoundaryGT gt = derive_boundary_gt(m);
        const int radius = oracle::uniform_int(rng, 0, 6);
        const BoundaryGT pruned = prune_gt(gt, m, radius);
        for (int r = 0; r < 14; ++r) {
            for (int c = 0; c < 17; ++c) {
                const std::size_t p = r * 17 + c;
                int nearest = 1 << 20;
                for (int rr = 0; rr < 14; ++rr)
                    for (int cc = 0; cc < 17; ++cc)
                        if (m.ids[rr * 17 + cc] != 0) nearest = std::min(nearest, std::max(std::abs(rr - r), std::abs(cc - c)));
                if (gt.labels[p] == BoundaryLabel::edge) {
                    EXPECT_EQ(pruned.labels[p], BoundaryLabel::edge);
                } else {
                    EXPECT_EQ(pruned.labels[p], nearest <= radius ? BoundaryLabel::non_edge : BoundaryLabel::ignore);
                }
            }
        }
    }
}

TEST(PruneGT, RetainedEdgeFractionTwoWays) {
    SynthConfig c;
    c.height = 96;
    c.width = 96;
    c.num_instances = 6;
    c.min_size = 10;
    c.max_size = 24;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        c.seed = seed;
        const SyntheticScene scene = synth(c);
        const InstanceIdMap ids{c.height, c.width, scene.gt.instance};
        const BoundaryGT pruned = prune_gt(derive_boundary_gt(ids), ids, 4);
        std::size_t edge = 0, kept = 0;
        for (BoundaryLabel l : pruned.labels) {
            edge += l == BoundaryLabel::edge;
            kept += l != BoundaryLabel::ignore;
        }
        const double by_mask = static_cast<double>(edge) / static_cast<double>(kept);
        const double alpha = balance_coefficient(pruned);
        const double by_formula = alpha / (1.0 + alpha);
        EXPECT_NEAR(by_mask, by_formula, 1e-15);
        EXPECT_GT(by_mask, 0.0);
        EXPECT_LT(by_mask, 1.0);
    }
}

TEST(BalancedLoss, FixedPoints) {
    const double ln2 = std::log(2.0);
    EXPECT_LE(balanced_loss(1.0, 1, 1.0), 1e-11);
    EXPECT_NEAR(balanced_loss(0.5, 0, 1.0), 0.693147180559945309, 1e-12);
    EXPECT_NEAR(balanced_loss(0.5, 1, 3.0), ln2, 1e-12);
    EXPECT_NEAR(balanced_loss(0.25, 1, 1.0), 2 * ln2, 1e-12);
    EXPECT_NEAR(balanced_loss(0.75, 0, 2.0), 4 * ln2, 1e-12);
    EXPECT_NEAR(balanced_loss(0.9, 0, 1.0 / 9.0), std::log(10.0) / 9.0, 1e-12);
    EXPECT_NEAR(balanced_loss(std::exp(-1.0), 1, 0.3), 1.0, 1e-12);
    EXPECT_NEAR(balanced_loss(1.0 - std::exp(-2.0), 0, 0.5), 1.0, 1e-12);
    EXPECT_NEAR(balanced_loss(0.0, 1, 1.0), 12 * std::log(10.0), 1e-12);
    EXPECT_NEAR(balanced_loss(0.0, 0, 2.0), 2e-12, 1e-12);
}

TEST(BalancedLoss, UnitWeightIsNegativeLogLikelihood) {
    std::mt19937_64 rng(55);
    for (int i = 0; i < 20; ++i) {
        const double p = oracle::uniform(rng, 0.001, 0.999);
        const int y = oracle::uniform_int(rng, 0, 1);
        const double nll = -(y * std::log(p) + (1 - y) * std::log(1 - p));
        EXPECT_NEAR(balanced_loss(p, y, 1.0), nll, 1e-12 * std::max(1.0, nll));
    }
}

TEST(BalancedLoss, NonnegativeAndMonotone) {
    std::mt19937_64 rng(56);
    for (int i = 0; i < 200; ++i) {
        double p = oracle::uniform(rng, 0.0, 1.0);
        double q = oracle::uniform(rng, 0.0, 1.0);
        if (p > q) std::swap(p, q);
        if (q - p < 1e-9) continue;
        const double alpha = oracle::uniform(rng, 0.01, 5.0);
        EXPECT_GE(balanced_loss(p, 0, alpha), 0.0);
        EXPECT_GE(balanced_loss(p, 1, alpha), 0.0);
        EXPECT_GT(balanced_loss(p, 1, alpha), balanced_loss(q, 1, alpha));
        EXPECT_LT(balanced_loss(p, 0, alpha), balanced_loss(q, 0, alpha));
    }
}

TEST(BalancedLoss, Validation) {
    EXPECT_THROW(balanced_loss(0.5, 2, 1.0), ValidationError);
    EXPECT_THROW(balanced_loss(NAN, 1, 1.0), ValidationError);
}

TEST(BalancedLoss, ConstantPredictorMatchesDirectSum) {
    std::mt19937_64 rng(57);
    for (int trial = 0; trial < 10; ++trial) {
        const InstanceIdMap m = random_instance_map(rng, 24, 24);
        const BoundaryGT gt = derive_boundary_gt(m);
        const double n1 = static_cast<double>(gt.count(BoundaryLabel::edge));
        const double n0 = static_cast<double>(gt.count(BoundaryLabel::non_edge));
        if (n1 == 0) continue;
        const double alpha = balance_coefficient(gt);
        const double p = n1 / (n0 + n1);
        double sum = 0.0;
        for (BoundaryLabel l : gt.labels) sum += balanced_loss(p, l == BoundaryLabel::edge ? 1 : 0, alpha);
        const double mean = sum / (n0 + n1);
        const double direct = (n1 * -std::log(p) + n0 * alpha * -std::log(1.0 - p)) / (n0 + n1);
        EXPECT_NEAR(mean, direct, 1e-9 * direct);
    }
}

TEST(BalanceCoefficient, Ratios) {
    BoundaryGT gt{1, 10, std::vector<BoundaryLabel>(10, BoundaryLabel::non_edge)};
    gt.labels[0] = gt.labels[1] = gt.labels[2] = BoundaryLabel::edge;
    gt.labels[9] = BoundaryLabel::ignore;
    EXPECT_DOUBLE_EQ(balance_coefficient(gt), 0.5);
    BoundaryGT even{1, 4, {BoundaryLabel::edge, BoundaryLabel::non_edge, BoundaryLabel::edge, BoundaryLabel::non_edge}};
    EXPECT_DOUBLE_EQ(balance_coefficient(even), 1.0);
    BoundaryGT sparse{10, 10, std::vector<BoundaryLabel>(100, BoundaryLabel::non_edge)};
    for (int i = 0; i < 10; ++i) sparse.labels[i * 10] = BoundaryLabel::edge;
    EXPECT_DOUBLE_EQ(balance_coefficient(sparse), 1.0 / 9.0);
    EXPECT_THROW(balance_coefficient(BoundaryGT{1, 2, {BoundaryLabel::edge, BoundaryLabel::ignore}}), ValidationError);
}
