#include "affdec/errors.hpp"
#include "affdec/sublevel.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

using namespace affdec;

namespace {

Poly2 random_quartic(unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Poly2 p(4);
    for (int i = 0; i <= 4; ++i)
        for (int j = 0; i + j <= 4; ++j) p.set(i, j, u(rng));
    return p;
}

struct CoverReport {
    int min_cover = 0;
    int max_overlap = 0;
    int size_violations = 0;
};

// Checks coverage and the size cases by point sampling, independent of the enclosures.
CoverReport inspect(const SublevelCover& cover, const Poly2& P) {
    CoverReport rep;
    const auto pieces = cover.parallelograms();
    const auto c1 = grid_counts(pieces, 1);
    rep.min_cover = *std::min_element(c1.begin(), c1.end());
    const auto c100 = grid_counts(pieces, 100);
    rep.max_overlap = *std::max_element(c100.begin(), c100.end());
    const double R = cover.R, C = SublevelOptions{}.dyadic_slack;
    for (const auto& [k, fam] : cover.families) {
        const double s = SublevelCover::sigma(k);
        for (const auto& piece : fam) {
            const double w = width(piece.omega);
            const Parallelogram two = dilate(piece.omega, 2);
            double lo = 1e300, hi = 0;
            for (int i = 0; i <= 6; ++i)
                for (int j = 0; j <= 6; ++j) {
                    const double v = std::abs(P(two.map({-1 + i / 3.0, -1 + j / 3.0}))) / cover.scale;
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
            bool ok = true;
            switch (piece.size_case) {
                case SizeCase::A:
                    ok = lo >= s / C * (1 - 1e-9) && hi <= C * s * (1 + 1e-9) && w >= 0.5 * std::max(s, 1 / R);
                    break;
                case SizeCase::B:
                    ok = w >= 0.25 / R && w <= 4 / R && hi <= C * s;
                    break;
                case SizeCase::C:
                    ok = hi <= C * std::pow(R, -6) * 2 && w >= 0.5 / R;
                    break;
            }
            if (!ok) ++rep.size_violations;
        }
    }
    return rep;
}

}  // namespace

TEST(Sublevel, ConstantIsOneFamily) {
    // At R = 1 the only dyadic level in [R^{-6}, 1] is σ = 1.
    EXPECT_EQ(sublevel_cover(Poly2::constant(0.5), 1, 0.25).families.begin()->first, 0);
    for (double R : {2.0, 16.0, 256.0}) {
        const auto half = sublevel_cover(Poly2::constant(0.5), R, 0.25);
        ASSERT_EQ(half.families.size(), 1u);
        EXPECT_EQ(half.families.begin()->first, 1);
        ASSERT_EQ(half.families.begin()->second.size(), 1u);
        EXPECT_EQ(half.families.begin()->second[0].size_case, SizeCase::A);
        EXPECT_DOUBLE_EQ(width(half.families.begin()->second[0].omega), 2.0);
    }
    const auto minus_one = sublevel_cover(Poly2::constant(-1.0), 64, 0.25);
    ASSERT_EQ(minus_one.families.size(), 1u);
    EXPECT_EQ(minus_one.families.begin()->first, 0);
    EXPECT_EQ(minus_one.size(), 1u);
}

TEST(Sublevel, LinearGivesVerticalStrips) {
    const double R = 64;
    const auto cover = sublevel_cover(Poly2::monomial(1, 0), R, 0.25);
    EXPECT_TRUE(cover.unclassified.empty());
    int b_count = 0;
    for (const auto& [k, fam] : cover.families)
        for (const auto& piece : fam) {
            // Full-height strips: two sides vertical, spanning [-1,1] in ξ₂.
            const auto bb = bounding_box(piece.omega);
            EXPECT_LE(bb[2], -1 + 1e-9);
            EXPECT_GE(bb[3], 1 - 1e-9);
            const double w = width(piece.omega);
            if (piece.size_case == SizeCase::B) {
                ++b_count;
                EXPECT_NEAR(0.5 * (bb[0] + bb[1]), 0.0, 1e-12);
                EXPECT_LE(w, 4 / R);
            } else {
                EXPECT_EQ(piece.size_case, SizeCase::A);
                const double s = SublevelCover::sigma(k);
                EXPECT_GE(w, s / 4);
                EXPECT_LE(w, 4 * s);
            }
        }
    EXPECT_EQ(b_count, 1);
    const auto rep = inspect(cover, Poly2::monomial(1, 0));
    EXPECT_GE(rep.min_cover, 1);
    EXPECT_EQ(rep.size_violations, 0);
    EXPECT_LE(rep.max_overlap, 64);
}

TEST(Sublevel, CatalogInvariants) {
    const std::vector<std::pair<std::string, Poly2>> catalog = {
        {"linear", Poly2::monomial(1, 0)},
        {"parabola", Poly2(2, {{{2, 0}, 1.0}, {{0, 1}, -1.0}})},
        {"saddle", Poly2::monomial(1, 1)},
        {"double line", Poly2::monomial(2, 0, 24.0)},
        {"indefinite", Poly2(2, {{{2, 0}, 1.0}, {{0, 2}, -3.0}})},
        {"random quartic", random_quartic(7)},
    };
    for (const auto& [name, P] : catalog)
        for (double R : {16.0, 64.0, 256.0}) {
            const auto t0 = std::chrono::steady_clock::now();
            const auto cover = sublevel_cover(P, R, 0.25);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            const auto rep = inspect(cover, P);
            EXPECT_TRUE(cover.unclassified.empty()) << name << " R=" << R;
            EXPECT_GE(rep.min_cover, 1) << name << " R=" << R;
            EXPECT_EQ(rep.size_violations, 0) << name << " R=" << R;
            for (const auto& [k, fam] : cover.families) {
                EXPECT_GE(k, 0);
                EXPECT_LE(k, cover.k_max());
            }
            std::printf("%-15s R=%4g pieces=%6zu overlap100=%5d time=%.2fs\n", name.c_str(), R, cover.size(),
                        rep.max_overlap, secs);
        }
}

TEST(Sublevel, DoublingRStillCovers) {
    const Poly2 P = random_quartic(3);
    for (double R : {16.0, 32.0}) {
        const auto rep = inspect(sublevel_cover(P, R, 0.25), P);
        EXPECT_GE(rep.min_cover, 1);
    }
}

TEST(ZeroNeighbourhood, HorizontalStrip) {
    const auto pieces = zero_nbhd_cover(Poly2::monomial(0, 1), Parallelogram::unit_square(), 0.1, 1.0);
    ASSERT_EQ(pieces.size(), 1u);
    const auto bb = bounding_box(pieces[0]);
    EXPECT_NEAR(bb[0], -1, 1e-12);
    EXPECT_NEAR(bb[1], 1, 1e-12);
    EXPECT_NEAR(bb[2], -0.1, 1e-8);
    EXPECT_NEAR(bb[3], 0.1, 1e-8);
    EXPECT_NEAR(width(pieces[0]), 0.2, 1e-8);
}

TEST(ZeroNeighbourhood, DiagonalStrip) {
    const Poly2 P(1, {{{1, 0}, 1.0}, {{0, 1}, 1.0}});
    const double kappa = std::sqrt(2.0);
    const auto pieces = zero_nbhd_cover(P, Parallelogram::unit_square(), 0.1, kappa);
    EXPECT_LE(pieces.size(), 4u);
    for (const auto& p : pieces) EXPECT_NEAR(width(p), 0.2 / std::sqrt(2.0), 1e-8);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const Point2 x{u(rng), u(rng)};
        if (std::abs(P(x)) >= 0.1) continue;
        EXPECT_TRUE(std::any_of(pieces.begin(), pieces.end(), [&](const auto& p) { return contains(p, x); }));
    }
}

TEST(ZeroNeighbourhood, ParabolaIsTracked) {
    const Poly2 P(2, {{{0, 1}, 1.0}, {{2, 0}, -1.0}});
    const double delta = 0.05, kappa = 1.5;
    const Parallelogram omega0 = Parallelogram::box(-0.5, 0.5, -0.5, 0.5);
    const auto pieces = zero_nbhd_cover(P, omega0, delta, kappa);
    EXPECT_GT(pieces.size(), 1u);
    for (const auto& p : pieces) {
        const double w = width(p);
        EXPECT_GE(w, 0.25 * delta / kappa);
        EXPECT_LE(w, 8 * delta / kappa);
        const Parallelogram two = dilate(p, 2);
        for (int i = 0; i <= 8; ++i)
            for (int j = 0; j <= 8; ++j) EXPECT_LE(std::abs(P(two.map({-1 + i / 4.0, -1 + j / 4.0}))), 8 * delta);
    }
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    int sampled = 0;
    while (sampled < 10000) {
        const Point2 x{u(rng), u(rng)};
        if (std::abs(P(x)) >= delta) continue;
        ++sampled;
        ASSERT_TRUE(std::any_of(pieces.begin(), pieces.end(), [&](const auto& p) { return contains(p, x); }))
            << x[0] << "," << x[1];
    }
}

TEST(ZeroNeighbourhood, GradientHypothesis) {
    // |∇P| ranges over [1, √17] on [-2,2]², wider than any [κ/2, 2κ].
    const Poly2 P(2, {{{0, 1}, 1.0}, {{2, 0}, -1.0}});
    EXPECT_THROW(zero_nbhd_cover(P, Parallelogram::unit_square(), 0.05, 2.0), GradientHypothesisFails);
    EXPECT_THROW(zero_nbhd_cover(Poly2::monomial(0, 1), Parallelogram::unit_square(), 0.1, 10.0),
                 GradientHypothesisFails);
}
