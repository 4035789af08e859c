#include "affdec/errors.hpp"
#include "affdec/fourier.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace affdec;

namespace {

constexpr double kPi = std::numbers::pi;

LatticeData random_lattice(unsigned seed, double step, int count, int span) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> k(-span, span - 1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    LatticeData f;
    f.origin = {0.1, -0.2, 0.3};
    f.step = {step, step, step};
    for (int q = 0; q < count; ++q) {
        f.index.push_back({k(rng), k(rng), k(rng)});
        f.weight.push_back({u(rng), u(rng)});
    }
    return f;
}

}  // namespace

TEST(Synthesize, SingleNodeAtOriginIsConstant) {
    FourierData f;
    f.nodes.push_back({{0, 0}, 0, {1, 0}, 0.375});
    const Field F = synthesize(f, {{0, 0, 0}, 4, 8});
    for (const Complex& v : F.values) {
        EXPECT_NEAR(v.real(), 0.375, 1e-15);
        EXPECT_NEAR(v.imag(), 0, 1e-15);
    }
}

TEST(Synthesize, ConjugatePairIsRealCosine) {
    FourierData f;
    f.nodes.push_back({{0.3, -0.7}, 0.45, {0.5, 0.25}, 1});
    f.nodes.push_back({{-0.3, 0.7}, -0.45, {0.5, -0.25}, 1});
    const SynthesisGrid grid{{1, 2, 3}, 6, 12};
    const Field F = synthesize(f, grid);
    double worst = 0;
    for (int i = 0; i < grid.n; ++i)
        for (int j = 0; j < grid.n; ++j)
            for (int k = 0; k < grid.n; ++k) {
                const Complex v = F.values[(static_cast<std::size_t>(i) * grid.n + j) * grid.n + k];
                const Point3 x = grid.point(i, j, k);
                const double t = 2 * kPi * (0.3 * x[0] - 0.7 * x[1] + 0.45 * x[2]);
                worst = std::max(worst, std::abs(v.imag()));
                EXPECT_NEAR(v.real(), std::cos(t) - 0.5 * std::sin(t), 1e-12);
            }
    EXPECT_LT(worst, 1e-12);
}

TEST(Synthesize, LatticeMatchesDirectSummation) {
    const SynthesisGrid grid{{0.5, -0.25, 1}, 8, 16};
    const LatticeData lat = random_lattice(7, 1 / (grid.n * grid.spacing()), 200, 8);
    const Field fast = synthesize_lattice(lat, grid);
    const Field direct = synthesize(to_nodes(lat), grid);
    double worst = 0;
    for (std::size_t q = 0; q < fast.values.size(); ++q) worst = std::max(worst, std::abs(fast.values[q] - direct.values[q]));
    EXPECT_LT(worst, 1e-10);
}

TEST(Synthesize, LatticeStepMustMatchGrid) {
    const SynthesisGrid grid{{0, 0, 0}, 8, 16};
    LatticeData lat = random_lattice(1, 0.1, 4, 2);
    EXPECT_THROW(synthesize_lattice(lat, grid), InvalidArgument);
}

TEST(Synthesize, BudgetAndGridChecks) {
    FourierData f;
    f.nodes.resize(1000);
    EXPECT_THROW(synthesize(f, {{0, 0, 0}, 4, 16}, 1e6), BudgetExceeded);
    EXPECT_THROW(synthesize(f, {{0, 0, 0}, 4, 4}), InvalidArgument);
}

TEST(Synthesize, PlancherelOnTheGrid) {
    const SynthesisGrid grid{{0, 0, 0}, 4, 16};
    // Distinct lattice indices within one period.
    LatticeData lat;
    lat.step = {1 / (grid.n * grid.spacing()), 1 / (grid.n * grid.spacing()), 1 / (grid.n * grid.spacing())};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double mass = 0;
    for (int a = -4; a < 4; ++a)
        for (int b = -4; b < 4; b += 2)
            for (int c = -8; c < 8; c += 3) {
                lat.index.push_back({a, b, c});
                lat.weight.push_back({u(rng), u(rng)});
                mass += std::norm(lat.weight.back());
            }
    const Field F = synthesize(to_nodes(lat), grid);
    double energy = 0;
    for (const Complex& v : F.values) energy += std::norm(v);
    EXPECT_NEAR(energy / (mass * static_cast<double>(grid.size())), 1, 1e-8);
}

TEST(LpNorm, ConstantOnBallGivesBallVolume) {
    FourierData f;
    f.nodes.push_back({{0, 0}, 0, {1, 0}, 1});
    const SynthesisGrid grid{{0, 0, 0}, 8, 64};
    const Field F = synthesize(f, grid);
    const double vol = 4.0 / 3 * kPi * 512;
    for (double p : {1.0, 2.0, 4.0}) EXPECT_NEAR(lp_norm(F, p, Weight::SharpBall) / std::pow(vol, 1 / p), 1, 0.02) << p;
}

TEST(LpNorm, InfinityIsMax) {
    FourierData f;
    f.nodes.push_back({{0.2, 0.1}, 0.3, {1, 0}, 1});
    f.nodes.push_back({{-0.1, 0.4}, 0.05, {0, 2}, 1});
    const SynthesisGrid grid{{0, 0, 0}, 3, 16};
    const Field F = synthesize(f, grid);
    double m = 0;
    for (int i = 0; i < grid.n; ++i)
        for (int j = 0; j < grid.n; ++j)
            for (int k = 0; k < grid.n; ++k) {
                const Point3 x = grid.point(i, j, k);
                if (std::hypot(x[0], x[1], x[2]) <= grid.R)
                    m = std::max(m, std::abs(F.values[(static_cast<std::size_t>(i) * grid.n + j) * grid.n + k]));
            }
    EXPECT_DOUBLE_EQ(lp_norm(F, INFINITY, Weight::SharpBall), m);
    EXPECT_THROW(lp_norm(F, 0.5, Weight::SharpBall), InvalidArgument);
}

TEST(LpNorm, WeightBoundsAgainstSharpBall) {
    const SynthesisGrid grid{{1, -1, 0.5}, 5, 24, 2};
    for (int i = 0; i < grid.n; ++i)
        for (int j = 0; j < grid.n; ++j)
            for (int k = 0; k < grid.n; ++k) {
                const Point3 x = grid.point(i, j, k);
                const double w = wb_weight(grid, x);
                const bool inside = std::hypot(x[0] - 1, x[1] + 1, x[2] - 0.5) <= grid.R;
                EXPECT_LE(w, 1.0);
                if (inside) {
                    EXPECT_GE(w, std::exp2(-100.0));
                }
            }
    EXPECT_DOUBLE_EQ(wb_weight(grid, grid.center), 1.0);
}
