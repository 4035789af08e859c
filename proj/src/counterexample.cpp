#include "affdec/counterexample.hpp"

#include "affdec/errors.hpp"
#include "affdec/verify.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

namespace affdec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxPieces = 20'000'000;

struct Integrand {
    int k;
    double a;
    double operator()(double t) const {
        return std::exp(-t / 2) * std::pow(t, a) * std::pow(std::abs(std::sin(2 * std::pow(t, k))), 0.25);
    }
};

double exponent(int k) { return 0.75 * k - 2; }

// e^{-T/2} < 10^{-18}.
double truncation_point() { return 2 * 18 * std::log(10.0); }

double zero(int k, double m) { return std::pow(m * kPi / 2, 1.0 / k); }

double piece(const Integrand& f, double a, double b) {
    return boost::math::quadrature::gauss<double, 32>::integrate(f, a, b);
}

// Suffix sums of the pieces [t_m, t_{m+1}] for m ≥ m0, up to the truncation point.
struct Pieces {
    long m0 = 0;
    std::vector<double> suffix;
};

Pieces tabulate(const Integrand& f, double n_min) {
    const double T = truncation_point();
    Pieces p;
    p.m0 = static_cast<long>(std::ceil(2 * std::pow(n_min, f.k) / kPi));
    const long m_end = static_cast<long>(std::ceil(2 * std::pow(T, f.k) / kPi));
    if (m_end - p.m0 > static_cast<long>(kMaxPieces))
        throw BudgetExceeded("counterexample quadrature needs " + std::to_string(m_end - p.m0) + " pieces");
    std::vector<double> values(static_cast<std::size_t>(std::max(0L, m_end - p.m0)));
    for (long m = p.m0; m < m_end; ++m) values[m - p.m0] = piece(f, zero(f.k, m), zero(f.k, m + 1));
    p.suffix.assign(values.size() + 1, 0.0);
    for (std::size_t i = values.size(); i-- > 0;) p.suffix[i] = p.suffix[i + 1] + values[i];
    return p;
}

double integral_from(const Integrand& f, const Pieces& p, double n) {
    const long m = std::max(p.m0, static_cast<long>(std::ceil(2 * std::pow(n, f.k) / kPi)));
    const double head = piece(f, n, zero(f.k, m));
    const double v = head + p.suffix[std::min<std::size_t>(m - p.m0, p.suffix.size() - 1)];
    if (!std::isfinite(v) || v <= 0) throw QuadratureNonConvergent("counterexample integral is not finite");
    return v;
}

void check_k(int k) {
    if (k < 3) throw InvalidArgument("k must be at least 3");
}

}  // namespace

double counterexample_integral(int k, double n) {
    check_k(k);
    const Integrand f{k, exponent(k)};
    return integral_from(f, tabulate(f, n), n);
}

double counterexample_integral_mean(int k, double n) {
    check_k(k);
    const double a = exponent(k);
    const double mean = std::tgamma(0.625) / (std::sqrt(kPi) * std::tgamma(1.125));
    return mean * std::pow(2.0, a + 1) * boost::math::tgamma(a + 1, n / 2);
}

CounterexampleScan counterexample_scan(int k, double q, const std::vector<double>& n_values) {
    check_k(k);
    if (!(q >= 1)) throw InvalidArgument("q must be at least 1");
    if (n_values.empty()) throw InvalidArgument("n range is empty");
    for (double n : n_values)
        if (!(n >= 3 && n <= 40)) throw InvalidArgument("n must lie in [3, 40]");
    const auto t0 = std::chrono::steady_clock::now();

    CounterexampleScan scan;
    scan.k = k;
    scan.q = q;
    scan.p_prime = 2 * q;
    const double a = exponent(k);
    const Integrand f{k, a};
    const Pieces pieces = tabulate(f, *std::min_element(n_values.begin(), n_values.end()));
    scan.pieces = pieces.suffix.size() - 1;
    const double T = truncation_point();
    scan.tail_bound = std::pow(2.0, a + 1) * boost::math::tgamma(a + 1, T / 2);

    std::vector<double> ns, ratios, ratios_mean;
    for (double n : n_values) {
        CounterexampleRow row;
        row.n = n;
        row.I = integral_from(f, pieces, n);
        row.lower = row.I / (std::exp(-n / 2) * std::pow(n, a));
        // (n^{-1}e^{-n})^{-1/p'} = n^{1/p'} e^{n/p'}, kept in log form.
        const double denom_log = -(std::log(n) + n) / scan.p_prime;
        row.ratio = std::exp(std::log(row.I) / q - denom_log);
        row.ratio_mean = std::exp(std::log(counterexample_integral_mean(k, n)) / q - denom_log);
        scan.rows.push_back(row);
        ns.push_back(n);
        ratios.push_back(row.ratio);
        ratios_mean.push_back(row.ratio_mean);
    }
    scan.c_min = scan.c_max = scan.rows.front().lower;
    for (const auto& row : scan.rows) {
        scan.c_min = std::min(scan.c_min, row.lower);
        scan.c_max = std::max(scan.c_max, row.lower);
    }
    scan.increasing = true;
    for (std::size_t i = 1; i < scan.rows.size(); ++i)
        if (!(scan.rows[i].n > scan.rows[i - 1].n && scan.rows[i].ratio > scan.rows[i - 1].ratio)) scan.increasing = false;
    if (ns.size() >= 2) {
        scan.slope = fit_loglog_slope(ns, ratios);
        scan.slope_mean = fit_loglog_slope(ns, ratios_mean);
    }
    scan.slope_direct = (0.75 * k - 1.5) / q;
    scan.slope_displayed = k / q;
    scan.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return scan;
}

}  // namespace affdec
