#pragma once

#include <cstddef>
#include <vector>

namespace affdec {

/// I(n) = ∫_n^∞ e^{-t/2} t^{3k/4−2} |sin(2t^k)|^{1/4} dt, split at the zeros t_m = (mπ/2)^{1/k}
/// with 32-point Gauss–Legendre per piece, truncated where e^{-t/2} < 10^{-18}.
double counterexample_integral(int k, double n);

/// Replaces |sin|^{1/4} by its mean Γ(5/8)/(√π Γ(9/8)): M·2^{a+1}Γ(a+1, n/2) with a = 3k/4 − 2.
double counterexample_integral_mean(int k, double n);

struct CounterexampleRow {
    double n = 0;
    double I = 0;
    /// I(n) / (e^{-n/2} n^{3k/4−2}).
    double lower = 0;
    /// I(n)^{1/q} / (n^{-1}e^{-n})^{1/p'}.
    double ratio = 0;
    /// The ratio with I replaced by the mean-value integral.
    double ratio_mean = 0;
};

struct CounterexampleScan {
    int k = 3;
    double q = 2, p_prime = 4;
    std::vector<CounterexampleRow> rows;
    double c_min = 0, c_max = 0;
    bool increasing = false;
    /// Least-squares slope of log ratio against log n over the rows.
    double slope = 0;
    /// Same fit on ratio_mean.
    double slope_mean = 0;
    /// (3k/4 − 3/2)/q: substituting 1/q = 2/p' into the endpoint estimate.
    double slope_direct = 0;
    /// k/q: the exponent read off n^{8k/4−1} ≤ C^{p'} n^{-1}.
    double slope_displayed = 0;
    /// Bound on the truncated tail ∫_T^∞ e^{-t/2} t^{3k/4−2} dt.
    double tail_bound = 0;
    std::size_t pieces = 0;
    double runtime = 0;
};

/// Requires k ≥ 3, q ≥ 1 and every n in [3, 40]; p' = 2q. Throws BudgetExceeded when the
/// zero count up to the truncation point exceeds 2·10^7.
CounterexampleScan counterexample_scan(int k, double q, const std::vector<double>& n_values);

}  // namespace affdec
