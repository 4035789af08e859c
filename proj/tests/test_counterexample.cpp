#include "affdec/counterexample.hpp"
#include "affdec/errors.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace affdec;

namespace {

// Tanh-sinh on each zero interval of sin(2t^k), truncated at t = 40.
double tanh_sinh_integral(int k, double n) {
    boost::math::quadrature::tanh_sinh<double> ts;
    const double a = 0.75 * k - 2;
    auto f = [&](double t) {
        return std::exp(-t / 2) * std::pow(t, a) * std::pow(std::abs(std::sin(2 * std::pow(t, k))), 0.25);
    };
    double acc = 0, prev = n;
    for (long m = static_cast<long>(std::ceil(2 * std::pow(n, k) / std::numbers::pi));; ++m) {
        const double z = std::pow(m * std::numbers::pi / 2, 1.0 / k);
        if (z <= prev) continue;
        if (z >= 40) return acc + ts.integrate(f, prev, 40.0);
        acc += ts.integrate(f, prev, z);
        prev = z;
    }
}

}  // namespace

TEST(CounterexampleIntegral, MatchesTanhSinh) {
    for (double n : {5.0, 12.0}) {
        const double I = counterexample_integral(3, n);
        EXPECT_NEAR(I, tanh_sinh_integral(3, n), 1e-4 * I) << "n = " << n;
    }
}

TEST(CounterexampleIntegral, MeanValueMatchesExpSinh) {
    const double mean = std::tgamma(5.0 / 8) / (std::sqrt(std::numbers::pi) * std::tgamma(9.0 / 8));
    boost::math::quadrature::exp_sinh<double> es;
    for (int k : {3, 4})
        for (double n : {5.0, 20.0}) {
            const double a = 0.75 * k - 2;
            const double ref = mean * es.integrate([&](double t) { return std::exp(-(n + t) / 2) * std::pow(n + t, a); });
            EXPECT_NEAR(counterexample_integral_mean(k, n), ref, 1e-10 * ref);
        }
}

TEST(CounterexampleIntegral, LowerBoundByLeadingTerm) {
    // I(n) ≥ c e^{-n/2} n^{3k/4−2} with c near 2M for large n.
    const double mean = std::tgamma(5.0 / 8) / (std::sqrt(std::numbers::pi) * std::tgamma(9.0 / 8));
    const double n = 20;
    const double lead = std::exp(-n / 2) * std::pow(n, 0.25);
    EXPECT_NEAR(counterexample_integral(3, n) / lead, 2 * mean, 0.05 * 2 * mean);
}

TEST(CounterexampleScan, RatioGrowsAsPowerOfN) {
    std::vector<double> ns;
    for (int n = 5; n <= 25; ++n) ns.push_back(n);
    const CounterexampleScan s = counterexample_scan(3, 2, ns);
    ASSERT_EQ(s.rows.size(), ns.size());
    EXPECT_GT(s.c_min, 0);
    EXPECT_TRUE(s.increasing);
    EXPECT_NEAR(s.slope, s.slope_mean, 0.01);
    EXPECT_DOUBLE_EQ(s.slope_direct, 0.375);
    EXPECT_DOUBLE_EQ(s.slope_displayed, 1.5);
    EXPECT_GT(s.slope, 0.3);
    EXPECT_LT(s.tail_bound, 1e-12 * s.rows.back().I);
    for (const auto& r : s.rows) EXPECT_GT(r.lower, 0);
}

TEST(CounterexampleScan, RejectsBadArguments) {
    EXPECT_THROW(counterexample_scan(2, 2, {5}), InvalidArgument);
    EXPECT_THROW(counterexample_scan(3, 0.5, {5}), InvalidArgument);
    EXPECT_THROW(counterexample_scan(3, 2, {2}), InvalidArgument);
    EXPECT_THROW(counterexample_scan(3, 2, {}), InvalidArgument);
}
