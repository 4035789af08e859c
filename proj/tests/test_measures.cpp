#include "affdec/errors.hpp"
#include "affdec/measures.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace affdec;

namespace {

const Poly2 kParaboloid(2, {{{2, 0}, 0.5}, {{0, 2}, 0.5}});
const Poly2 kSaddle(2, {{{1, 1}, 1.0}});
const Poly2 kQuartic(4, {{{4, 0}, 1.0}, {{0, 2}, 1.0}});

Poly2 random_poly(std::mt19937_64& rng, int degree) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Poly2 p(degree);
    for (int i = 0; i <= degree; ++i)
        for (int j = 0; i + j <= degree; ++j) p.set(i, j, u(rng));
    return p;
}

// Random phases on an m×m grid of ξ in Ω, η jittered inside the 1/R neighbourhood.
FourierData random_nodes(const Poly2& phi, const Parallelogram& omega, double R, int m, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    FourierData f;
    const double cell = 2.0 / m;
    const double jac = std::abs(omega.map.linear.det());
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const Point2 xi = omega.map({-1 + (i + 0.5) * cell, -1 + (j + 0.5) * cell});
            FourierNode node;
            node.xi = xi;
            node.eta = phi(xi) + 0.5 * u(rng) / R;
            node.amp = std::polar(1.0, std::numbers::pi * u(rng));
            node.volume = cell * cell * jac * 2 / R;
            f.nodes.push_back(node);
        }
    return f;
}

}  // namespace

TEST(Density, Examples) {
    EXPECT_DOUBLE_EQ(density(kParaboloid, MeasureSpec::affine(), {0.3, -0.8}), 1.0);
    EXPECT_NEAR(density(kQuartic, MeasureSpec::affine(), {0.5, 0}), std::pow(6.0, 0.25), 1e-14);
    EXPECT_DOUBLE_EQ(density(kSaddle, MeasureSpec::M(), {0.9, 0.1}), 1.0);
}

TEST(Density, SentinelsAtHessianZeros) {
    EXPECT_EQ(density(kQuartic, MeasureSpec::affine(), {0, 0.5}), 0.0);
    EXPECT_TRUE(std::isinf(density(kQuartic, MeasureSpec::M(), {0, 0.5})));
    EXPECT_DOUBLE_EQ(density(kQuartic, MeasureSpec::surface_measure(), {0, 0.5}), 1.0);
}

TEST(Density, Presets) {
    EXPECT_DOUBLE_EQ(MeasureSpec::from_preset("affine_damped", 0.1).exponent, 0.35);
    EXPECT_DOUBLE_EQ(MeasureSpec::from_preset("M_damped", 0.1).exponent, -0.35);
    EXPECT_DOUBLE_EQ(MeasureSpec::from_preset("lebesgue_pullback").exponent, -0.25);
    EXPECT_THROW(MeasureSpec::from_preset("lebesgue"), InvalidArgument);
}

TEST(Density, InvariantUnderAffineTerms) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        const Poly2 phi = random_poly(rng, 4);
        Poly2 shifted = phi;
        shifted.add(0, 0, u(rng));
        shifted.add(1, 0, u(rng));
        shifted.add(0, 1, u(rng));
        const Point2 xi{u(rng), u(rng)};
        EXPECT_NEAR(density(shifted, MeasureSpec::affine(), xi), density(phi, MeasureSpec::affine(), xi), 1e-12);
    }
}

TEST(Density, ScalesAsSquareRootOfLambda) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        const Poly2 phi = random_poly(rng, 3);
        const double lambda = std::exp2(4 * u(rng));
        const Point2 xi{u(rng), u(rng)};
        const double base = density(phi, MeasureSpec::affine(), xi);
        EXPECT_NEAR(density(phi * lambda, MeasureSpec::affine(), xi), std::sqrt(lambda) * base, 1e-12 * (1 + base));
    }
}

TEST(CellDensity, IntegratesSingularLine) {
    // |24ξ₁²|^{-1/4} over [-a,a]² has mean 24^{-1/4}·2/√a.
    const double a = 0.125;
    const double got = cell_density(kQuartic, MeasureSpec::M(), {0, 0.3}, 2 * a);
    EXPECT_NEAR(got / (std::pow(24.0, -0.25) * 2 / std::sqrt(a)), 1, 1e-3);
}

TEST(CellDensity, SmoothCellMatchesPointValue) {
    EXPECT_NEAR(cell_density(kSaddle, MeasureSpec::M(), {0.2, 0.2}, 0.1), 1.0, 1e-12);
}

TEST(L2NormDM, Examples) {
    FourierData one;
    one.nodes.push_back({{0.1, 0.2}, 0.025, {1, 0}, 1});
    EXPECT_DOUBLE_EQ(l2_norm_dM(one, kParaboloid, MeasureSpec::M()), 1.0);

    const double v = 0.3;
    FourierData two;
    two.nodes.push_back({{0.1, 0.2}, 0.025, {1, 0}, v});
    two.nodes.push_back({{-0.4, 0.5}, 0.205, {0, 2}, v});
    EXPECT_NEAR(l2_norm_dM(two, kParaboloid, MeasureSpec::M()), std::sqrt(5 * v), 1e-15);
}

TEST(L2NormDM, QuarticMatchesDirectSum) {
    const FourierData f = random_nodes(kQuartic, Parallelogram::box(0.05, 1, -1, 1), 64, 12, 5);
    double direct = 0;
    for (const auto& node : f.nodes)
        direct += std::norm(node.amp) * node.volume * std::pow(24 * node.xi[0] * node.xi[0], -0.25);
    EXPECT_NEAR(l2_norm_dM(f, kQuartic, MeasureSpec::M()), std::sqrt(direct), 1e-12 * std::sqrt(direct));
}

TEST(L2NormDM, StraddlingCellsStayFinite) {
    FourierData f;
    f.nodes.push_back({{0, 0.5}, 0.25, {1, 0}, 0.01, 0.1});
    const double got = l2_norm_dM(f, kQuartic, MeasureSpec::M());
    EXPECT_TRUE(std::isfinite(got));
    EXPECT_NEAR(got * got / 0.01, std::pow(24.0, -0.25) * 2 / std::sqrt(0.05), 1e-3 * got * got / 0.01);
}

TEST(CheckSupport, RejectsNodesOffTheSlab) {
    FourierData f = random_nodes(kParaboloid, Parallelogram::unit_square(), 32, 4, 1);
    EXPECT_NO_THROW(check_support(f, kParaboloid, 32, Parallelogram::unit_square()));
    f.nodes[3].eta += 0.1;
    EXPECT_THROW(check_support(f, kParaboloid, 32, Parallelogram::unit_square()), NodeOutsideSupport);
}

TEST(AffineInvariance, IdentityHasNoResidual) {
    const FourierData f = random_nodes(kParaboloid, Parallelogram::unit_square(), 8, 6, 2);
    EXPECT_LT(affine_invariance_residual(f, kParaboloid, Parallelogram::unit_square(), 1, 8, 24), 1e-10);
}

TEST(AffineInvariance, HalfSquareAtScaleOneEighth) {
    const Parallelogram omega = Parallelogram::box(-0.5, 0.5, -0.5, 0.5);
    const FourierData f = random_nodes(kParaboloid, omega, 16, 8, 3);
    const auto rep = affine_invariance(f, kParaboloid, omega, 0.125, 16, 48);
    EXPECT_GT(rep.lhs, 0);
    EXPECT_LT(rep.residual, 1e-3);
}

TEST(AffineInvariance, ShearedParallelogram) {
    const Parallelogram omega = Parallelogram::from_edges({0.2, -0.1}, {0.4, 0.1}, {0.15, 0.3});
    const Poly2 phi(3, {{{2, 0}, 0.5}, {{0, 2}, 0.7}, {{1, 1}, 0.2}, {{3, 0}, 0.1}});
    const FourierData f = random_nodes(phi, omega, 16, 8, 4);
    EXPECT_LT(affine_invariance_residual(f, phi, omega, 0.25, 16, 32), 1e-3);
}

TEST(AffineInvariance, PushforwardFactor) {
    const Parallelogram omega = Parallelogram::from_edges({0.3, 0.1}, {0.5, 0.2}, {-0.1, 0.25});
    const double s = 0.2;
    const FourierData f = random_nodes(kQuartic, omega, 32, 9, 6);
    const NeighbourhoodMap L = neighbourhood_map(kQuartic, omega, s);
    const FourierData g = pull_back(f, L);
    const Poly2 bar = recentred(kQuartic, omega.map) * (1 / s);
    const double det_t = std::abs(omega.map.linear.det());
    const double factor = std::pow(det_t * det_t / (s * s), 0.125) * std::sqrt(s * det_t);
    const double lhs = l2_norm_dM(f, kQuartic, MeasureSpec::M());
    EXPECT_NEAR(lhs / (factor * l2_norm_dM(g, bar, MeasureSpec::M())), 1, 1e-10);
}

TEST(AffineInvariance, RejectsScaleOutsideRange) {
    const FourierData f = random_nodes(kParaboloid, Parallelogram::unit_square(), 8, 2, 2);
    EXPECT_THROW(affine_invariance(f, kParaboloid, Parallelogram::unit_square(), 0.01, 8, 16), InvalidArgument);
}
