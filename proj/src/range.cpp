#include "affdec/range.hpp"

#include "affdec/errors.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace affdec {

namespace {

// Tensor Bernstein coefficients of degree n in each variable on [0,1]².
struct Patch {
    int n = 0;
    std::vector<double> b;  // b[i*(n+1)+j]

    double at(int i, int j) const { return b[i * (n + 1) + j]; }
    double& at(int i, int j) { return b[i * (n + 1) + j]; }
    double min_coeff() const { return *std::min_element(b.begin(), b.end()); }
    double max_coeff() const { return *std::max_element(b.begin(), b.end()); }
    double corner_min() const { return std::min({at(0, 0), at(0, n), at(n, 0), at(n, n)}); }
    double corner_max() const { return std::max({at(0, 0), at(0, n), at(n, 0), at(n, n)}); }
};

using Dense = std::vector<double>;  // (n+1)×(n+1) power-basis coefficients, a[k*(n+1)+l]

Dense mul_dense(const Dense& x, const Dense& y, int n) {
    Dense out((n + 1) * (n + 1), 0.0);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n - i; ++j) {
            const double c = x[i * (n + 1) + j];
            if (c == 0.0) continue;
            for (int k = 0; k <= n - i; ++k)
                for (int l = 0; l <= n - i - j - k; ++l) out[(i + k) * (n + 1) + j + l] += c * y[k * (n + 1) + l];
        }
    return out;
}

// Power coefficients of P(M t) where M maps [0,1]² onto the box.
Dense compose_dense(const Poly2& p, const AffineMap2& m, int n) {
    const int w = n + 1;
    Dense x(w * w, 0.0), y(w * w, 0.0), one(w * w, 0.0);
    one[0] = 1.0;
    if (n >= 1) {
        x[1 * w + 0] = m.linear.a;
        x[0 * w + 1] = m.linear.b;
        y[1 * w + 0] = m.linear.c;
        y[0 * w + 1] = m.linear.d;
    }
    x[0] = m.shift[0];
    y[0] = m.shift[1];
    std::vector<Dense> xp(n + 1), yp(n + 1);
    xp[0] = yp[0] = one;
    for (int i = 1; i <= n; ++i) {
        xp[i] = mul_dense(xp[i - 1], x, n);
        yp[i] = mul_dense(yp[i - 1], y, n);
    }
    Dense out(w * w, 0.0);
    for (const auto& [e, c] : p.terms()) {
        const Dense t = mul_dense(xp[e.first], yp[e.second], n);
        for (int k = 0; k < w * w; ++k) out[k] += c * t[k];
    }
    return out;
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

Patch to_bernstein(const Dense& a, int n) {
    const int w = n + 1;
    Patch p;
    p.n = n;
    p.b.assign(w * w, 0.0);
    std::vector<double> inv(w);
    for (int k = 0; k <= n; ++k) inv[k] = 1.0 / binom(n, k);
    // Separable: first along the first index, then the second.
    Dense tmp(w * w, 0.0);
    for (int i = 0; i <= n; ++i)
        for (int l = 0; l <= n; ++l) {
            double s = 0.0;
            for (int k = 0; k <= i; ++k) s += binom(i, k) * inv[k] * a[k * w + l];
            tmp[i * w + l] = s;
        }
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            double s = 0.0;
            for (int l = 0; l <= j; ++l) s += binom(j, l) * inv[l] * tmp[i * w + l];
            p.at(i, j) = s;
        }
    return p;
}

// de Casteljau at 1/2 on a strided line of n+1 values.
void split_line(const double* src, int stride, int n, double* left, double* right, int ostride) {
    double work[64] = {};
    for (int i = 0; i <= n; ++i) work[i] = src[i * stride];
    left[0] = work[0];
    right[n * ostride] = work[n];
    for (int r = 1; r <= n; ++r) {
        for (int i = 0; i <= n - r; ++i) work[i] = 0.5 * (work[i] + work[i + 1]);
        left[r * ostride] = work[0];
        right[(n - r) * ostride] = work[n - r];
    }
}

std::array<Patch, 4> subdivide(const Patch& p) {
    const int n = p.n, w = n + 1;
    Patch lo, hi;
    lo.n = hi.n = n;
    lo.b.assign(w * w, 0.0);
    hi.b.assign(w * w, 0.0);
    for (int j = 0; j <= n; ++j) split_line(&p.b[j], w, n, &lo.b[j], &hi.b[j], w);
    std::array<Patch, 4> out;
    for (auto& q : out) {
        q.n = n;
        q.b.assign(w * w, 0.0);
    }
    for (int i = 0; i <= n; ++i) {
        split_line(&lo.b[i * w], 1, n, &out[0].b[i * w], &out[1].b[i * w], 1);
        split_line(&hi.b[i * w], 1, n, &out[2].b[i * w], &out[3].b[i * w], 1);
    }
    return out;
}

struct MinResult {
    double lower, inner;
    int subdivisions;
};

// Branch-and-bound on the minimum Bernstein coefficient.
MinResult minimize(const Patch& root, double tol, int cap) {
    struct Item {
        double lo;
        Patch patch;
        bool operator<(const Item& o) const { return lo > o.lo; }
    };
    double best = root.corner_min();
    double settled = std::numeric_limits<double>::infinity();
    std::priority_queue<Item> queue;
    queue.push({root.min_coeff(), root});
    int count = 0;
    while (!queue.empty()) {
        if (best - queue.top().lo <= tol) break;
        Item top = queue.top();
        queue.pop();
        if (++count > cap) throw BudgetExceeded("range enclosure exceeded subdivision cap");
        for (auto& child : subdivide(top.patch)) {
            best = std::min(best, child.corner_min());
            const double lo = child.min_coeff();
            if (lo >= best - tol)
                settled = std::min(settled, lo);
            else
                queue.push({lo, std::move(child)});
        }
    }
    double lower = std::min(best, settled);
    if (!queue.empty()) lower = std::min(lower, queue.top().lo);
    return {lower, best, count};
}

Patch patch_for(const Poly2& p, const Parallelogram& box) {
    const int n = std::max(p.true_degree(), 0);
    if (n > 60) throw InvalidArgument("degree too large for range enclosure");
    const Mat2& L = box.map.linear;
    // t ∈ [0,1]² ↦ T(2t − 1)
    AffineMap2 m{{2 * L.a, 2 * L.b, 2 * L.c, 2 * L.d},
                 {box.map.shift[0] - L.a - L.b, box.map.shift[1] - L.c - L.d}};
    return to_bernstein(compose_dense(p, m, n), n);
}

}  // namespace

RangeEnclosure range_enclosure(const Poly2& p, const Parallelogram& box, double tol, int max_subdivisions) {
    if (!(tol > 0)) throw InvalidArgument("range enclosure tolerance must be positive");
    if (p.is_zero()) return {};
    const Patch root = patch_for(p, box);
    Patch neg = root;
    for (double& c : neg.b) c = -c;
    const MinResult lo = minimize(root, tol, max_subdivisions);
    const MinResult hi = minimize(neg, tol, max_subdivisions);
    double mag = 0.0;
    for (double c : root.b) mag = std::max(mag, std::abs(c));
    const double pad = 16 * DBL_EPSILON * mag * (root.n + 1);
    RangeEnclosure r;
    r.lower = lo.lower - pad;
    r.inner_lower = lo.inner;
    r.upper = -hi.lower + pad;
    r.inner_upper = -hi.inner;
    r.subdivisions = lo.subdivisions + hi.subdivisions;
    return r;
}

RangeEnclosure abs_range(const RangeEnclosure& r) {
    RangeEnclosure a = r;
    if (r.lower >= 0) return a;
    if (r.upper <= 0) {
        a.lower = -r.upper;
        a.upper = -r.lower;
        a.inner_lower = -r.inner_upper;
        a.inner_upper = -r.inner_lower;
        return a;
    }
    a.lower = 0.0;
    a.upper = std::max(-r.lower, r.upper);
    // An attained value of |P| no smaller than its true minimum.
    a.inner_lower = (r.inner_lower <= 0 && r.inner_upper >= 0) ? 0.0
                                                               : std::min(std::abs(r.inner_lower), std::abs(r.inner_upper));
    a.inner_upper = std::max(std::abs(r.inner_lower), std::abs(r.inner_upper));
    return a;
}

double sup_abs(const Poly2& p, const Parallelogram& box, double tol) {
    if (!(tol > 0)) throw InvalidArgument("range enclosure tolerance must be positive");
    if (p.is_zero()) return 0.0;
    // Branch-and-bound on max |P| directly; patches where P is near zero drop out early.
    struct Item {
        double hi;
        Patch patch;
        bool operator<(const Item& o) const { return hi < o.hi; }
    };
    auto bound = [](const Patch& q) { return std::max(std::abs(q.min_coeff()), std::abs(q.max_coeff())); };
    auto attained = [](const Patch& q) { return std::max(std::abs(q.corner_min()), std::abs(q.corner_max())); };
    const Patch root = patch_for(p, box);
    double mag = 0.0;
    for (double c : root.b) mag = std::max(mag, std::abs(c));
    const double pad = 16 * DBL_EPSILON * mag * (root.n + 1);
    double best = attained(root);
    double settled = 0.0;
    std::priority_queue<Item> queue;
    queue.push({bound(root), root});
    int count = 0;
    while (!queue.empty() && queue.top().hi - best > tol) {
        Item top = queue.top();
        queue.pop();
        if (++count > kDefaultSubdivisionCap) throw BudgetExceeded("range enclosure exceeded subdivision cap");
        for (auto& child : subdivide(top.patch)) {
            best = std::max(best, attained(child));
            const double hi = bound(child);
            if (hi <= best + tol)
                settled = std::max(settled, hi);
            else
                queue.push({hi, std::move(child)});
        }
    }
    double upper = std::max(best, settled);
    if (!queue.empty()) upper = std::max(upper, queue.top().hi);
    return upper + pad;
}

int certified_sign(const Poly2& p, const Parallelogram& box, int max_subdivisions) {
    if (p.is_zero()) return 0;
    Patch root = patch_for(p, box);
    const double c0 = root.at(0, 0);
    if (c0 == 0.0) return 0;
    const int sign = c0 > 0 ? 1 : -1;
    if (sign < 0)
        for (double& c : root.b) c = -c;
    double mag = 0.0;
    for (double c : root.b) mag = std::max(mag, std::abs(c));
    const double pad = 16 * DBL_EPSILON * mag * (root.n + 1);
    std::vector<Patch> stack{root};
    int count = 0;
    while (!stack.empty()) {
        Patch q = std::move(stack.back());
        stack.pop_back();
        if (q.min_coeff() > pad) continue;
        if (q.corner_min() <= pad) return 0;
        if (++count > max_subdivisions) return 0;
        for (auto& child : subdivide(q)) stack.push_back(std::move(child));
    }
    return sign;
}

}  // namespace affdec
