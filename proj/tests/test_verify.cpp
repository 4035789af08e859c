#include "affdec/errors.hpp"
#include "affdec/verify.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace affdec;

namespace {

const Poly2 kParaboloid(2, {{{2, 0}, 0.5}, {{0, 2}, 0.5}});
const Poly2 kQuartic(4, {{{4, 0}, 1.0}, {{0, 2}, 1.0}});
const Poly2 kCylinder(2, {{{0, 2}, 1.0}});

FourierNode node(const Poly2& phi, Point2 xi, Complex amp, double volume) {
    return {xi, phi(xi), amp, volume, 0};
}

}  // namespace

TEST(RestrictionRatio, SingleNodeMatchesBallVolume) {
    const double R = 16, v = 0.01;
    FourierData f;
    f.nodes.push_back(node(kParaboloid, {0, 0}, {1, 0}, v));
    const SynthesisGrid grid{{0, 0, 0}, R, 48, 1.0};
    const RatioReport r = restriction_ratio(kParaboloid, f, R, MeasureSpec::M(), grid);
    // F ≡ v, det D²φ = 1: ratio = v|B_R|^{1/4} / (√v R^{-1/2}).
    const double ball = 4.0 / 3 * std::numbers::pi * R * R * R;
    EXPECT_NEAR(r.value, v * std::pow(ball, 0.25) / (std::sqrt(v) / std::sqrt(R)), 0.02 * r.value);
    EXPECT_FALSE(r.zero_input);
}

TEST(RestrictionRatio, ZeroInput) {
    FourierData f;
    f.nodes.push_back(node(kParaboloid, {0.3, 0.1}, {0, 0}, 0.01));
    const RatioReport r = restriction_ratio(kParaboloid, f, 8, MeasureSpec::M(), {{0, 0, 0}, 8, 16, 1.0});
    EXPECT_TRUE(r.zero_input);
    EXPECT_EQ(r.value, 0);
}

TEST(RestrictionRatio, InvariantUnderAmplitudeScaling) {
    FourierData f;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    for (int q = 0; q < 12; ++q) f.nodes.push_back(node(kParaboloid, {u(rng), u(rng)}, std::polar(1.0, 7.0 * q), 1e-3));
    const SynthesisGrid grid{{0, 0, 0}, 8, 24, 1.0};
    const double a = restriction_ratio(kParaboloid, f, 8, MeasureSpec::M(), grid).value;
    for (auto& n : f.nodes) n.amp *= Complex(0, -3.5);
    const double b = restriction_ratio(kParaboloid, f, 8, MeasureSpec::M(), grid).value;
    EXPECT_NEAR(a, b, 1e-12 * a);
}

TEST(RestrictionEnsemble, ParaboloidIsBoundedAcrossScales) {
    EnsembleOptions opt;
    opt.trials = 4;
    double hi = 0, lo = INFINITY;
    for (double R : {8.0, 16.0, 32.0}) {
        const EnsembleReport rep = restriction_ensemble(kParaboloid, R, MeasureSpec::M(), opt);
        ASSERT_EQ(rep.values.size(), 4u);
        EXPECT_GT(rep.min, 0);
        hi = std::max(hi, rep.max);
        lo = std::min(lo, rep.min);
    }
    EXPECT_LE(hi / lo, 10);
}

TEST(RestrictionEnsemble, SeededRunsRepeat) {
    EnsembleOptions opt;
    opt.trials = 3;
    const EnsembleReport a = restriction_ensemble(kQuartic, 8, MeasureSpec::M(), opt);
    const EnsembleReport b = restriction_ensemble(kQuartic, 8, MeasureSpec::M(), opt);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.inputs_hash, b.inputs_hash);
    opt.seed = 8;
    EXPECT_NE(restriction_ensemble(kQuartic, 8, MeasureSpec::M(), opt).values, a.values);
}

TEST(TrialSeed, DependsOnSeedAndTrial) {
    EXPECT_EQ(trial_seed(7, 3), trial_seed(7, 3));
    EXPECT_NE(trial_seed(7, 3), trial_seed(7, 4));
    EXPECT_NE(trial_seed(7, 3), trial_seed(8, 3));
}

TEST(AssignNodes, LowestIndexWinsAndStrayNodesThrow) {
    const std::vector<Parallelogram> family{Parallelogram::box(-1, 0, -1, 1), Parallelogram::box(0, 1, -1, 1)};
    FourierData f;
    f.nodes.push_back(node(kCylinder, {-0.5, 0}, {1, 0}, 1));
    f.nodes.push_back(node(kCylinder, {0, 0.2}, {1, 0}, 1));
    f.nodes.push_back(node(kCylinder, {0.5, 0}, {1, 0}, 1));
    EXPECT_EQ(assign_nodes(f, family), (std::vector<int>{0, 0, 1}));
    f.nodes.push_back(node(kCylinder, {1.5, 0}, {1, 0}, 1));
    EXPECT_THROW(assign_nodes(f, family), UnassignedNode);
}

TEST(DecouplingRatio, SinglePieceIsOne) {
    const std::vector<Parallelogram> family{Parallelogram::box(-1, 1, -1, 1)};
    FourierData f;
    for (int q = 0; q < 5; ++q) f.nodes.push_back(node(kQuartic, {-0.8 + 0.4 * q, 0.1 * q}, std::polar(1.0, 1.3 * q), 0.01));
    const RatioReport r = decoupling_ratio(kQuartic, family, f, 4, 32, 1, 0.25, {{0, 0, 0}, 32, 24, 0.1});
    EXPECT_NEAR(r.value, 1, 1e-12);
    EXPECT_EQ(r.extra.at("pieces"), 1);
    EXPECT_EQ(r.extra.at("cs_floor"), 1);
    EXPECT_EQ(r.extra.at("cs_ceiling"), 1);
}

TEST(DecouplingRatio, SeparatedPiecesAreOrthogonalInL2) {
    // |F₁+F₂|² = 2 + 2cos(2πx·Δ); the cross term is the transform of w_B at |Δ| = 1, of order 1e-3.
    const double R = 100;
    const std::vector<Parallelogram> family{Parallelogram::box(-1, 0, -1, 1), Parallelogram::box(0, 1, -1, 1)};
    FourierData f;
    f.nodes.push_back(node(kCylinder, {-0.5, 0}, {1, 0}, 1));
    f.nodes.push_back(node(kCylinder, {0.5, 0}, {0, 1}, 1));
    const RatioReport r = decoupling_ratio(kCylinder, family, f, 2, R, 1, 0.25, {{0, 0, 0}, R, 64, 0.08});
    EXPECT_NEAR(r.value, 1, 0.01);
    EXPECT_NEAR(r.extra.at("scaled"), r.value, 1e-15);
}

TEST(DecouplingRatio, CeilingAlwaysHolds) {
    const std::vector<Parallelogram> family{Parallelogram::box(-1, 0, -1, 1), Parallelogram::box(0, 1, -1, 1)};
    FourierData f;
    // Identical pieces shifted by a frequency too small to separate on the grid: the ratio approaches √2.
    f.nodes.push_back(node(kCylinder, {-1e-4, 0}, {1, 0}, 1));
    f.nodes.push_back(node(kCylinder, {1e-4, 0}, {1, 0}, 1));
    const RatioReport r = decoupling_ratio(kCylinder, family, f, 4, 16, 1, 0.25, {{0, 0, 0}, 16, 16, 0.1});
    EXPECT_NEAR(r.value, std::sqrt(2.0), 1e-3);
    EXPECT_EQ(r.extra.at("cs_ceiling"), 1);
}

TEST(DecouplingRatio, RejectsNodesOffTheSurface) {
    const std::vector<Parallelogram> family{Parallelogram::box(-1, 1, -1, 1)};
    FourierData f;
    f.nodes.push_back({{0.2, 0.2}, kQuartic({0.2, 0.2}) + 0.5, {1, 0}, 1, 0});
    EXPECT_THROW(decoupling_ratio(kQuartic, family, f, 4, 16, 1, 0.25, {{0, 0, 0}, 16, 16, 0.1}), NodeOutsideSupport);
}

TEST(DecouplingEnsemble, QuarticFamiliesAreBounded) {
    const DecompositionResult res = decompose(kQuartic, 32, 0.25);
    DecouplingOptions opt;
    opt.trials = 3;
    const DecouplingEnsemble d = decoupling_ensemble(res, kQuartic, opt);
    ASSERT_EQ(d.families.size(), res.families.size());
    for (const auto& fam : d.families) {
        EXPECT_EQ(fam.nodes, fam.pieces * 9);
        EXPECT_LE(fam.max_ratio, std::sqrt(static_cast<double>(fam.pieces)) * (1 + 1e-9));
        EXPECT_GT(fam.max_ratio, 0);
    }
}

TEST(DyadicSplit, RoutesByHessianDeterminant) {
    // det D²φ = 24ξ₁².
    const double R = 100;
    FourierData f;
    for (double x : {0.0, 1e-7, std::sqrt(0.3 / 24), std::sqrt(3.0 / 24), std::sqrt(0.01 / 24)})
        f.nodes.push_back(node(kQuartic, {x, 0.2}, {1, 0}, 1));
    const DyadicSplit s = dyadic_split(f, kQuartic, R);
    EXPECT_EQ(s.size(), f.nodes.size());
    EXPECT_EQ(s.zero.nodes.size(), 2u);
    ASSERT_EQ(s.bands.size(), 3u);
    EXPECT_EQ(s.bands.at(0).nodes.size(), 1u);
    EXPECT_EQ(s.bands.at(1).nodes.size(), 1u);
    EXPECT_EQ(s.bands.at(6).nodes.size(), 1u);
}

TEST(DyadicSplit, PartitionsRandomNodes) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1, 1);
    FourierData f;
    for (int q = 0; q < 500; ++q) f.nodes.push_back(node(kQuartic, {u(rng), u(rng)}, {1, 0}, 1));
    const DyadicSplit s = dyadic_split(f, kQuartic, 64);
    EXPECT_EQ(s.size(), 500u);
    const Poly2 det = hessian_det(kQuartic);
    for (const auto& [e, band] : s.bands)
        for (const auto& n : band.nodes) {
            const double d = std::abs(det(n.xi));
            EXPECT_GT(d, std::exp2(-e - 1));
            if (e > 0) {
                EXPECT_LE(d, std::exp2(-e));
            }
        }
}

TEST(TinyCurvature, SingleNodeSaturatesHolder) {
    const Poly2 phi(2, {{{2, 0}, 1.0}, {{0, 2}, 1e-3}});
    FourierData f;
    f.nodes.push_back(node(phi, {0.1, -0.2}, std::polar(2.0, 0.3), 0.05));
    const RatioReport r = tiny_curvature_check(f, phi, 16, 0.25, 4e-3, {{0, 0, 0}, 16, 24, 1.0});
    EXPECT_NEAR(r.value, 1, 1e-9);
    EXPECT_NEAR(r.extra.at("ratio2"), 1, 1e-9);
    EXPECT_EQ(r.extra.at("vacuous"), 0);
}

TEST(TinyCurvature, RandomNodesStayBelowOne) {
    const Poly2 phi(2, {{{2, 0}, 1.0}, {{0, 2}, 1e-3}});
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    FourierData f;
    for (int q = 0; q < 40; ++q) f.nodes.push_back(node(phi, {u(rng), u(rng)}, std::polar(1.0, 3.0 * u(rng)), 1e-3));
    const RatioReport r = tiny_curvature_check(f, phi, 16, 0.25, 1e-2, {{0, 0, 0}, 16, 24, 1.0});
    EXPECT_GT(r.value, 0);
    EXPECT_LE(r.value, 1);
    EXPECT_LE(r.extra.at("ratio2"), 1);
    EXPECT_THROW(tiny_curvature_check(f, phi, 16, 0.25, 1e-3, {{0, 0, 0}, 16, 24, 1.0}), PreconditionFails);
}

TEST(TinyCurvature, EmptyInputIsVacuous) {
    const RatioReport r = tiny_curvature_check({}, kQuartic, 16, 0.25, 1e-6, {{0, 0, 0}, 16, 16, 1.0});
    EXPECT_TRUE(r.zero_input);
    EXPECT_EQ(r.extra.at("vacuous"), 1);
}

TEST(FitLogLogSlope, RecoversPowerLaw) {
    const std::vector<double> x{1, 2, 4, 8, 16};
    std::vector<double> y;
    for (double v : x) y.push_back(3 * std::pow(v, -0.75));
    EXPECT_NEAR(fit_loglog_slope(x, y), -0.75, 1e-12);
    EXPECT_THROW(fit_loglog_slope({1}, {1}), InvalidArgument);
}
