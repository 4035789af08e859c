#include "affdec/errors.hpp"
#include "affdec/flat1d.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace affdec;

namespace {

// Dense-grid estimate of the defect, independent of the enclosure code.
double grid_defect(const Poly1& p, double a, double b, int n = 200) {
    const Poly1 dp = p.derivative();
    double m = 0;
    for (int i = 0; i < n; ++i) {
        const double x = a + (b - a) * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double y = a + (b - a) * j / (n - 1);
            m = std::max(m, std::abs(p(x) - p(y) - dp(y) * (x - y)));
        }
    }
    return m;
}

const Poly1 kHalfSquare({0.0, 0.0, 0.5});

}  // namespace

TEST(Flat1d, DefectExamples) {
    for (double L : {0.1, 0.5, 2.0}) EXPECT_NEAR(flatness_defect(kHalfSquare, 0.3, 0.3 + L), L * L / 2, 1e-10);
    EXPECT_NEAR(flatness_defect(Poly1({1.0, -3.0}), -2, 2), 0.0, 1e-14);
    const Poly1 cube({0, 0, 0, 1.0});
    const double certified = flatness_defect(cube, 0, 1);
    const double grid = grid_defect(cube, 0, 1);
    EXPECT_GE(certified, grid);
    EXPECT_LE(certified - grid, 1e-3);
}

TEST(Flat1d, DefectMonotoneOnNestedIntervals) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const Poly1 p({0, 0, u(rng), u(rng), u(rng)});
        const double a = -2 + std::abs(u(rng)), b = 2 - std::abs(u(rng));
        const double a2 = a + 0.3 * (b - a) * std::abs(u(rng)), b2 = b - 0.3 * (b - a) * std::abs(u(rng));
        EXPECT_LE(flatness_defect(p, a2, b2), flatness_defect(p, a, b) + 1e-12);
    }
}

TEST(Flat1d, PartitionExamples) {
    const auto lin = flat_partition(Poly1({0.3, -0.5}), 0.1);
    ASSERT_EQ(lin.intervals.size(), 1u);
    EXPECT_EQ(lin.intervals[0].a, -2.0);
    EXPECT_EQ(lin.intervals[0].b, 2.0);

    const auto sq = flat_partition(kHalfSquare, 1.0 / 8);
    ASSERT_EQ(sq.intervals.size(), 8u);
    for (const auto& iv : sq.intervals) EXPECT_DOUBLE_EQ(iv.length(), 0.5);

    const Poly1 p({0, -1.0, 0, 1.0});
    const double delta = 1e-3;
    const auto part = flat_partition(p, delta);
    double prev = -2;
    for (const auto& iv : part.intervals) {
        EXPECT_DOUBLE_EQ(iv.a, prev);
        prev = iv.b;
        EXPECT_LE(grid_defect(p, iv.a, iv.b), 1.01 * delta);
        // Bisection size bound ½(2δ / sup|P''|)^{1/2}; sup|P''| = 12 on [-2,2].
        EXPECT_GE(iv.length(), 0.5 * std::sqrt(2 * delta / 12));
    }
    EXPECT_DOUBLE_EQ(prev, 2.0);

    EXPECT_THROW(flat_partition(Poly1({0, 0, 2.0}), 0.1), NotBounded);
}

TEST(Flat1d, CountMatchesClosedForm) {
    for (int k = 2; k <= 10; ++k) {
        const double delta = std::ldexp(1.0, -k);
        const auto part = flat_partition(kHalfSquare, delta);
        const double expected = std::ceil(4 / std::sqrt(2 * delta));
        const double n = static_cast<double>(part.intervals.size());
        for (const auto& iv : part.intervals) {
            EXPECT_GE(iv.length(), std::sqrt(delta) / 2);
            EXPECT_LE(grid_defect(kHalfSquare, iv.a, iv.b), 1.01 * delta);
        }
        EXPECT_LE(n, 2 * expected) << "delta=" << delta;
        EXPECT_GE(n, expected / 2) << "delta=" << delta;
    }
}

TEST(Flat1d, Merge) {
    IntervalPartition none;
    none.intervals = {{-2, 0}, {0, 2}};
    const auto same = merge_to_min_width(none, 1.0);
    ASSERT_EQ(same.intervals.size(), 2u);
    EXPECT_FALSE(same.intervals[0].stop);
    EXPECT_FALSE(same.intervals[1].stop);

    IntervalPartition mixed;
    mixed.intervals = {{0, 0.1}, {0.1, 0.2}, {0.2, 1.0}};
    const auto m = merge_to_min_width(mixed, 0.15);
    ASSERT_EQ(m.intervals.size(), 2u);
    EXPECT_NEAR(m.intervals[0].length(), 0.2, 1e-15);
    EXPECT_TRUE(m.intervals[0].stop);
    EXPECT_NEAR(m.intervals[1].length(), 0.8, 1e-15);
    EXPECT_FALSE(m.intervals[1].stop);

    IntervalPartition tiny;
    for (int i = 0; i < 8; ++i) tiny.intervals.push_back({-2 + 0.5 * i, -1.5 + 0.5 * i});
    const auto all = merge_to_min_width(tiny, 10);
    ASSERT_EQ(all.intervals.size(), 1u);
    EXPECT_EQ(all.intervals[0].a, -2.0);
    EXPECT_EQ(all.intervals[0].b, 2.0);
    EXPECT_TRUE(all.intervals[0].stop);

    // A trailing short run joins the previous interval.
    IntervalPartition tail;
    tail.intervals = {{0, 1}, {1, 1.05}};
    const auto t = merge_to_min_width(tail, 0.5);
    ASSERT_EQ(t.intervals.size(), 1u);
    EXPECT_TRUE(t.intervals[0].stop);
}

TEST(Flat1d, RandomPartitionsPassGridOracle) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const Poly1 p({0, u(rng), u(rng), u(rng), u(rng)});
        const double delta = std::ldexp(1.0, -3 - trial % 6);
        for (const auto& iv : flat_partition(p, delta).intervals)
            EXPECT_LE(grid_defect(p, iv.a, iv.b), 1.01 * delta);
    }
}
