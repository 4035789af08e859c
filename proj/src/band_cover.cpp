#include "affdec/band_cover.hpp"

#include "affdec/errors.hpp"
#include "affdec/range.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace affdec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Bernstein coefficients of f on [a,b].
std::vector<double> bernstein1(const Poly1& f, double a, double b) {
    const Poly1 g = f.compose_affine(b - a, a);
    const int n = std::max(g.degree(), 0);
    std::vector<double> out(n + 1, 0.0);
    std::vector<double> binom(n + 1, 1.0);  // C(n, i)
    for (int i = 1; i <= n; ++i) binom[i] = binom[i - 1] * (n - i + 1) / i;
    for (int k = 0; k <= n; ++k) {
        double ck = 1.0;  // C(k, i)
        for (int i = 0; i <= k; ++i) {
            out[k] += ck / binom[i] * g.coeff(i);
            ck = ck * (k - i) / (i + 1);
        }
    }
    return out;
}

// Decides f ≤ target on [a,b]; false when a violation is found or the budget runs out.
bool certify_le(const Poly1& f, double a, double b, double target) {
    if (f.is_zero()) return 0.0 <= target;
    std::vector<std::vector<double>> stack{bernstein1(f, a, b)};
    int budget = 4000;
    while (!stack.empty()) {
        std::vector<double> c = std::move(stack.back());
        stack.pop_back();
        double mag = 0;
        for (double x : c) mag = std::max(mag, std::abs(x));
        const double pad = 64 * std::numeric_limits<double>::epsilon() * mag;
        if (*std::max_element(c.begin(), c.end()) + pad <= target) continue;
        if (c.front() > target || c.back() > target) return false;
        if (--budget < 0) return false;
        const int n = static_cast<int>(c.size()) - 1;
        std::vector<double> left(n + 1), right(n + 1), w = c;
        for (int r = 0; r <= n; ++r) {
            left[r] = w[0];
            right[n - r] = w[n - r];
            for (int i = 0; i < n - r; ++i) w[i] = 0.5 * (w[i] + w[i + 1]);
        }
        stack.push_back(std::move(right));
        stack.push_back(std::move(left));
    }
    return true;
}

// Level curve s = g(t) of an increasing function on [s0,s1], clamped to the ends.
double level_root(const Poly2& q, double t, double v, double s0, double s1) {
    const Poly1 f = restrict_to_line(q, {t, 0}, {0, 1});
    double lo = s0, hi = s1;
    if (f(lo) >= v) return s0;
    if (f(hi) <= v) return s1;
    const Poly1 df = f.derivative();
    double s = 0.5 * (lo + hi);
    for (int it = 0; it < 100 && hi - lo > 1e-15 * (1 + std::abs(s)); ++it) {
        const double fs = f(s) - v;
        if (fs > 0)
            hi = s;
        else if (fs < 0)
            lo = s;
        else
            return s;
        const double d = df(s);
        double next = d > 0 ? s - fs / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        s = next;
    }
    return s;
}

struct Frame {
    const Poly2& q;
    const FrameRect& r;
};

// Q ≤ vl on {t ∈ [ta,tb], s0 ≤ s ≤ ℓ(t)} given monotonicity, ℓ(t) = a + m(t − ta).
bool below_ok(const Frame& f, double ta, double tb, double a, double m, double vl) {
    if (!std::isfinite(vl)) return true;
    const double s0 = f.r.s0, s1 = f.r.s1;
    // t-range where ℓ(t) ∈ [s0, s1], and where ℓ(t) > s1.
    auto inv = [&](double s) { return ta + (s - a) / m; };
    double in_a = ta, in_b = tb, over_a = 0, over_b = -1;
    if (m == 0) {
        if (a < s0) return true;
        if (a > s1) {
            in_b = in_a;
            over_a = ta;
            over_b = tb;
        }
    } else {
        const double x0 = inv(s0), x1 = inv(s1);
        in_a = std::max(ta, std::min(x0, x1));
        in_b = std::min(tb, std::max(x0, x1));
        over_a = m > 0 ? std::max(ta, x1) : ta;
        over_b = m > 0 ? tb : std::min(tb, x1);
    }
    if (in_b > in_a) {
        const Poly1 seg = restrict_to_line(f.q, {ta, a}, {1, m});
        if (!certify_le(seg, in_a - ta, in_b - ta, vl)) return false;
    }
    if (over_b > over_a) {
        const Poly1 top = restrict_to_line(f.q, {0, s1}, {1, 0});
        if (!certify_le(top, over_a, over_b, vl)) return false;
    }
    return true;
}

// Q ≥ vh on {t ∈ [ta,tb], ℓ(t) ≤ s ≤ s1}.
bool above_ok(const Frame& f, double ta, double tb, double a, double m, double vh) {
    if (!std::isfinite(vh)) return true;
    // Reflect s ↦ −s and negate Q: reduces to below_ok.
    const Poly2 refl = -compose_affine(f.q, {Mat2::diag(1, -1), {0, 0}});
    const FrameRect rr{f.r.origin, f.r.e_s, f.r.t0, f.r.t1, -f.r.s1, -f.r.s0};
    return below_ok({refl, rr}, ta, tb, -a, -m, -vh);
}

}  // namespace

AffineMap2 FrameRect::to_world() const {
    const Point2 t = e_t();
    return {{t[0], e_s[0], t[1], e_s[1]}, origin};
}

FrameRect FrameRect::around(const Parallelogram& omega, const Point2& dir) {
    const double n = std::hypot(dir[0], dir[1]);
    if (!(n > 0)) throw InvalidArgument("frame direction must be nonzero");
    FrameRect r;
    r.origin = omega.center();
    r.e_s = {dir[0] / n, dir[1] / n};
    const Point2 et = r.e_t();
    r.t0 = r.s0 = kInf;
    r.t1 = r.s1 = -kInf;
    for (const Point2& p : omega.corners()) {
        const double dx = p[0] - r.origin[0], dy = p[1] - r.origin[1];
        const double t = dx * et[0] + dy * et[1], s = dx * r.e_s[0] + dy * r.e_s[1];
        r.t0 = std::min(r.t0, t);
        r.t1 = std::max(r.t1, t);
        r.s0 = std::min(r.s0, s);
        r.s1 = std::max(r.s1, s);
    }
    return r;
}

std::optional<MonotoneBounds> certify_monotone(const Poly2& q, const FrameRect& r, double max_ratio,
                                               double max_slope) {
    const Parallelogram box = Parallelogram::box(r.t0, r.t1, r.s0, r.s1);
    const Poly2 qs = derivative(q, 0, 1);
    if (qs.is_zero()) return std::nullopt;
    const double centre = std::abs(qs({0.5 * (r.t0 + r.t1), 0.5 * (r.s0 + r.s1)}));
    if (!(centre > 0)) return std::nullopt;
    MonotoneBounds mb;
    const RangeEnclosure e = range_enclosure(qs, box, 1e-3 * centre, 20000);
    mb.ds_min = e.lower;
    mb.ds_max = e.upper;
    if (!(mb.ds_min > 0) || mb.ds_max > max_ratio * mb.ds_min) return std::nullopt;
    const double tol = 1e-3 * mb.ds_min;
    const Poly2 qt = derivative(q, 1, 0);
    mb.dt_max = qt.is_zero() ? 0.0 : sup_abs(qt, box, tol);
    if (mb.dt_max > max_slope * mb.ds_min) return std::nullopt;
    auto sup2 = [&](int a, int b) {
        const Poly2 d = derivative(q, a, b);
        return d.is_zero() ? 0.0 : sup_abs(d, box, tol);
    };
    const double g1 = mb.dt_max / mb.ds_min;
    mb.g2 = (sup2(2, 0) + 2 * sup2(1, 1) * g1 + sup2(0, 2) * g1 * g1) / mb.ds_min;
    return mb;
}

bool band_cover(const Poly2& p, const FrameRect& rect, const MonotoneBounds& mb, double vl, double vh,
                const Parallelogram& clip, const PieceAcceptor& accept, const BandCoverOptions& opts) {
    if (!(vl < vh)) throw InvalidArgument("band needs vl < vh");
    const AffineMap2 world = rect.to_world();
    const Poly2 q = compose_affine(p, world);
    const Frame frame{q, rect};
    const double s0 = rect.s0, s1 = rect.s1, S = s1 - s0;
    const double t_floor = 1e-9 * (rect.t1 - rect.t0);
    constexpr int K = 4;

    int pieces = 0;
    std::vector<std::pair<double, double>> stack{{rect.t0, rect.t1}};
    while (!stack.empty()) {
        const auto [ta, tb] = stack.back();
        stack.pop_back();
        const double dt = tb - ta, h = dt / K;
        auto split = [&]() {
            if (dt < t_floor) return false;
            const double tm = 0.5 * (ta + tb);
            stack.push_back({tm, tb});
            stack.push_back({ta, tm});
            return true;
        };

        std::array<double, K + 1> ts{}, lo{}, up{};
        bool all_bottom = true, all_top = true, clamped_low = false, clamped_high = false;
        for (int i = 0; i <= K; ++i) {
            ts[i] = ta + h * i;
            lo[i] = std::isfinite(vl) ? level_root(q, ts[i], vl, s0, s1) : s0;
            up[i] = std::isfinite(vh) ? level_root(q, ts[i], vh, s0, s1) : s1;
            all_bottom = all_bottom && up[i] == s0;
            all_top = all_top && lo[i] == s1;
            clamped_low = clamped_low || lo[i] == s0;
            clamped_high = clamped_high || up[i] == s1;
        }
        // Band absent from this column.
        if (all_bottom && std::isfinite(vh) && above_ok(frame, ta, tb, s0, 0.0, vh)) continue;
        if (all_top && std::isfinite(vl) && below_ok(frame, ta, tb, s1, 0.0, vl)) continue;

        const double m = (0.5 * (lo[K] + up[K]) - 0.5 * (lo[0] + up[0])) / dt;
        double band = 0;
        for (int i = 0; i <= K; ++i) band = std::max(band, up[i] - lo[i]);

        const double mu0 = mb.g2 * h * h / 8 + 1e-10 * S;
        double a_lo = 0, a_hi = 0;
        bool ok = false;
        for (int attempt = 0; attempt < 6 && !ok; ++attempt) {
            const double mu = mu0 * std::pow(4.0, attempt);
            a_lo = kInf;
            a_hi = -kInf;
            for (int i = 0; i <= K; ++i) {
                a_lo = std::min(a_lo, lo[i] - m * (ts[i] - ta));
                a_hi = std::max(a_hi, up[i] - m * (ts[i] - ta));
            }
            a_lo = std::max(a_lo - mu, s0 - std::max(0.0, m * dt));
            a_hi = std::min(a_hi + mu, s1 - std::min(0.0, m * dt));
            if (a_hi - a_lo < opts.min_thickness) {
                if (clamped_low || !clamped_high)
                    a_lo = a_hi - opts.min_thickness;
                else
                    a_hi = a_lo + opts.min_thickness;
            }
            ok = below_ok(frame, ta, tb, a_lo, m, vl) && above_ok(frame, ta, tb, a_hi, m, vh);
        }
        if (!ok) {
            if (!split()) return false;
            continue;
        }
        const double thick = a_hi - a_lo;
        const double allowed = std::max(opts.thickness_factor * band, opts.min_thickness) * (1 + 1e-9) + 1e-9 * S;
        if (thick > allowed && dt > thick) {
            split();
            continue;
        }
        const double tc = 0.5 * (ta + tb);
        const Parallelogram local = Parallelogram::from_edges(
            {tc, 0.5 * (a_lo + a_hi) + m * (tc - ta)}, {dt / 2, m * dt / 2}, {0, thick / 2});
        const Parallelogram piece{world.compose(local.map)};
        if (!intersects(piece, clip)) continue;
        if (!accept(piece)) {
            if (dt > thick && split()) continue;
            return false;
        }
        if (++pieces > opts.max_pieces) return false;
    }
    return true;
}

}  // namespace affdec
