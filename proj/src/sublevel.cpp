#include "affdec/sublevel.hpp"

#include "affdec/band_cover.hpp"
#include "affdec/errors.hpp"
#include "affdec/range.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace affdec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Classified {
    int k;
    CoverPiece piece;
};

class Builder {
public:
    Builder(const Poly2& pn, double R, int k_max, const SublevelOptions& opts, SublevelStats& stats)
        : p_(pn), px_(derivative(pn, 1, 0)), py_(derivative(pn, 0, 1)), R_(R), k_max_(k_max), opts_(opts),
          stats_(stats) {}

    std::optional<Classified> classify(const Parallelogram& omega) const {
        const Parallelogram two = dilate(omega, 2);
        RangeEnclosure r;
        try {
            const double mid = std::abs(p_(omega.center()));
            const double tol = 0.02 * mid + 1e-3 * std::ldexp(1.0, -k_max_);
            r = abs_range(range_enclosure(p_, two, tol, 20000));
        } catch (const BudgetExceeded&) {
            return std::nullopt;
        }
        const double lo = r.lower, hi = r.upper, C = opts_.dyadic_slack;
        const double w = width(omega), sig_min = SublevelCover::sigma(k_max_);
        CoverPiece piece{omega, SizeCase::C, lo, hi};
        if (lo > 0 && hi <= opts_.max_ratio * lo) {
            const int k0 = static_cast<int>(std::lround(-0.5 * std::log2(lo * hi)));
            for (int k : {k0, k0 - 1, k0 + 1}) {
                if (k < 0 || k > k_max_) continue;
                const double s = SublevelCover::sigma(k);
                if (s / C <= lo && hi <= C * s && w >= 0.5 * std::max(s, 1 / R_)) {
                    piece.size_case = SizeCase::A;
                    return Classified{k, piece};
                }
            }
        }
        if (hi <= C * sig_min && w >= 0.5 / R_) return Classified{k_max_, piece};
        if (w >= 0.25 / R_ && w <= 4 / R_ && hi <= opts_.b_slack) {
            const int k = hi > 0 ? std::min(k_max_, static_cast<int>(std::floor(std::log2(opts_.b_slack / hi))))
                                 : k_max_;
            piece.size_case = SizeCase::B;
            return Classified{k, piece};
        }
        return std::nullopt;
    }

    void box(double x0, double x1, double y0, double y1, int depth) {
        if (depth > opts_.max_depth) throw RecursionDepthExceeded("sublevel cover exceeded depth cap");
        ++stats_.boxes;
        const Parallelogram b = Parallelogram::box(x0, x1, y0, y1);
        if (auto c = classify(b)) {
            out.push_back(*c);
            return;
        }
        const double split_min = 4 / R_;
        const bool can_x = x1 - x0 >= split_min, can_y = y1 - y0 >= split_min;
        if ((can_x || can_y) && case1(b)) return;
        if (!can_x && !can_y) {
            unclassified.push_back({b, SizeCase::B, 0, 0});
            return;
        }
        // Split across the direction in which P varies most.
        double vx = 0, vy = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const Point2 xi{x0 + (x1 - x0) * i / 2, y0 + (y1 - y0) * j / 2};
                vx = std::max(vx, std::abs(px_(xi)) * (x1 - x0));
                vy = std::max(vy, std::abs(py_(xi)) * (y1 - y0));
            }
        bool sx = can_x && (vx >= 0.5 * vy || !can_y);
        bool sy = can_y && (vy >= 0.5 * vx || !can_x);
        if (!sx && !sy) sx = can_x, sy = can_y;
        const double xm = 0.5 * (x0 + x1), ym = 0.5 * (y0 + y1);
        if (sx && sy) {
            box(x0, xm, y0, ym, depth + 1);
            box(xm, x1, y0, ym, depth + 1);
            box(x0, xm, ym, y1, depth + 1);
            box(xm, x1, ym, y1, depth + 1);
        } else if (sx) {
            box(x0, xm, y0, y1, depth + 1);
            box(xm, x1, y0, y1, depth + 1);
        } else {
            box(x0, x1, y0, ym, depth + 1);
            box(x0, x1, ym, y1, depth + 1);
        }
    }

    std::vector<Classified> out;
    std::vector<CoverPiece> unclassified;

private:
    // Level bands of P along the gradient direction; false if the box must be split.
    bool case1(const Parallelogram& b) {
        const Point2 c = b.center();
        const Point2 g{px_(c), py_(c)};
        if (!(std::hypot(g[0], g[1]) > 0)) return false;
        const FrameRect rect = FrameRect::around(b, g);
        const Poly2 q = compose_affine(p_, rect.to_world());
        std::optional<MonotoneBounds> mb;
        try {
            mb = certify_monotone(q, rect, opts_.monotone_ratio, 1.0);
        } catch (const BudgetExceeded&) {
            return false;
        }
        if (!mb) return false;
        const Parallelogram fbox = Parallelogram::box(rect.t0, rect.t1, rect.s0, rect.s1);
        const RangeEnclosure pr = range_enclosure(q, fbox, 1e-3 * mb->ds_min * (rect.s1 - rect.s0));

        const double v0 = 0.6 / R_ * mb->ds_min;
        std::vector<double> cuts;
        for (double v = v0; v < pr.upper; v *= 2)
            if (v > pr.lower) cuts.push_back(v);
        for (double v = -v0; v > pr.lower; v *= 2)
            if (v < pr.upper) cuts.push_back(v);
        std::sort(cuts.begin(), cuts.end());
        std::vector<std::pair<double, double>> bands;
        double prev = -kInf;
        for (double v : cuts) {
            bands.push_back({prev, v});
            prev = v;
        }
        bands.push_back({prev, kInf});

        std::vector<Classified> pieces;
        while (!bands.empty()) {
            const auto [vl, vh] = bands.back();
            bands.pop_back();
            BandCoverOptions bo;
            const double span = std::isfinite(vl) && std::isfinite(vh) ? vh - vl
                                : std::isfinite(vl)                       ? std::abs(vl)
                                : std::isfinite(vh)                       ? std::abs(vh)
                                                                          : 0.0;
            bo.min_thickness = span / mb->ds_max;
            std::vector<Classified> got;
            const bool ok = band_cover(p_, rect, *mb, vl, vh, b, [&](const Parallelogram& piece) {
                auto cls = classify(piece);
                if (!cls) return false;
                got.push_back(*cls);
                return true;
            }, bo);
            if (ok) {
                pieces.insert(pieces.end(), got.begin(), got.end());
                continue;
            }
            // Retry with a narrower value window on one side of zero.
            if (std::isfinite(vl) && std::isfinite(vh) && vl * vh > 0 && vh / vl > 1.19) {
                const double gm = std::copysign(std::sqrt(vl * vh), vl);
                bands.push_back({vl, gm});
                bands.push_back({gm, vh});
                ++stats_.band_splits;
                continue;
            }
            return false;
        }
        ++stats_.case1_boxes;
        out.insert(out.end(), pieces.begin(), pieces.end());
        return true;
    }

    const Poly2& p_;
    Poly2 px_, py_;
    double R_;
    int k_max_;
    const SublevelOptions& opts_;
    SublevelStats& stats_;
};

Parallelogram quarter(const Parallelogram& o, int i, int j) {
    const Point2 c = o.map(Point2{i ? 0.5 : -0.5, j ? 0.5 : -0.5});
    const Mat2& L = o.map.linear;
    return {{{L.a / 2, L.b / 2, L.c / 2, L.d / 2}, c}};
}

void zero_cover_rec(const Poly2& p, const Parallelogram& region, double delta, int depth,
                    std::vector<Parallelogram>& out) {
    if (depth > 16) throw RecursionDepthExceeded("zero neighbourhood cover exceeded depth cap");
    const Point2 c = region.center();
    const Point2 g{derivative(p, 1, 0)(c), derivative(p, 0, 1)(c)};
    std::optional<MonotoneBounds> mb;
    FrameRect rect;
    if (std::hypot(g[0], g[1]) > 0) {
        rect = FrameRect::around(region, g);
        mb = certify_monotone(compose_affine(p, rect.to_world()), rect, 16, 4);
    }
    if (mb) {
        BandCoverOptions bo;
        bo.min_thickness = 2 * delta / mb->ds_max;
        std::vector<Parallelogram> got;
        const bool ok = band_cover(p, rect, *mb, -delta, delta, region, [&](const Parallelogram& piece) {
            if (sup_abs(p, dilate(piece, 2), 0.1 * delta) > 8 * delta) return false;
            got.push_back(piece);
            return true;
        }, bo);
        if (ok) {
            out.insert(out.end(), got.begin(), got.end());
            return;
        }
    }
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const Parallelogram sub = quarter(region, i, j);
            // Skip quarters where |P| ≥ δ throughout.
            const RangeEnclosure r = range_enclosure(p, sub, 0.1 * delta, 20000);
            if (r.lower >= delta || r.upper <= -delta) continue;
            zero_cover_rec(p, sub, delta, depth + 1, out);
        }
}

}  // namespace

std::string to_string(SizeCase c) {
    switch (c) {
        case SizeCase::A: return "a";
        case SizeCase::B: return "b";
        case SizeCase::C: return "c";
    }
    return "?";
}

SizeCase size_case_from_string(const std::string& s) {
    if (s == "a") return SizeCase::A;
    if (s == "b") return SizeCase::B;
    if (s == "c") return SizeCase::C;
    throw InvalidArgument("unknown size case '" + s + "'");
}

double SublevelCover::sigma(int k) { return std::ldexp(1.0, -k); }

int SublevelCover::k_max() const { return static_cast<int>(std::floor(6 * std::log2(R) + 1e-9)); }

std::size_t SublevelCover::size() const {
    std::size_t n = 0;
    for (const auto& [k, v] : families) n += v.size();
    return n + unclassified.size();
}

std::vector<Parallelogram> SublevelCover::parallelograms() const {
    std::vector<Parallelogram> out;
    for (const auto& [k, v] : families)
        for (const auto& p : v) out.push_back(p.omega);
    for (const auto& p : unclassified) out.push_back(p.omega);
    return out;
}

SublevelCover sublevel_cover(const Poly2& P, double R, double eps, const SublevelOptions& opts) {
    if (!(R >= 1)) throw InvalidArgument("R must be at least 1");
    SublevelCover cover;
    cover.source = P;
    cover.R = R;
    cover.eps = eps;
    const auto& dom = opts.domain;
    if (!(dom[1] > dom[0] && dom[3] > dom[2])) throw InvalidArgument("empty domain");
    const Parallelogram sq = Parallelogram::box(dom[0], dom[1], dom[2], dom[3]);
    const Poly2 px = derivative(P, 1, 0), py = derivative(P, 0, 1);
    const double tol = 1e-6 * std::max(1.0, coeff_norm(P));
    const double gx = px.is_zero() ? 0.0 : sup_abs(px, sq, tol);
    const double gy = py.is_zero() ? 0.0 : sup_abs(py, sq, tol);
    const double sup_p = P.is_zero() ? 0.0 : sup_abs(P, sq, tol);
    const double n = std::max({1.0, coeff_norm(P), sup_p, std::hypot(gx, gy)});
    // The slack absorbs the enclosure tolerance so exact powers of two are kept.
    cover.scale = std::exp2(std::ceil(std::log2(n) - 1e-5));
    const Poly2 pn = P * (1 / cover.scale);

    Builder b(pn, R, cover.k_max(), opts, cover.stats);
    b.box(dom[0], dom[1], dom[2], dom[3], 0);
    for (auto& c : b.out) cover.families[c.k].push_back(c.piece);
    auto by_centre = [](const CoverPiece& x, const CoverPiece& y) { return x.omega.center() < y.omega.center(); };
    for (auto& [k, v] : cover.families) std::stable_sort(v.begin(), v.end(), by_centre);
    cover.unclassified = std::move(b.unclassified);
    return cover;
}

std::vector<Parallelogram> zero_nbhd_cover(const Poly2& P, const Parallelogram& omega0, double delta, double kappa) {
    if (!(delta > 0) || !(kappa > 0)) throw InvalidArgument("delta and kappa must be positive");
    if (width(omega0) < delta / kappa) throw PreconditionFails("width of the region is below delta/kappa");
    const Poly2 g2 = derivative(P, 1, 0) * derivative(P, 1, 0) + derivative(P, 0, 1) * derivative(P, 0, 1);
    const RangeEnclosure r = range_enclosure(g2, dilate(omega0, 2), 1e-6 * kappa * kappa);
    if (r.lower < kappa * kappa / 4 || r.upper > 4 * kappa * kappa)
        throw GradientHypothesisFails("gradient norm leaves [kappa/2, 2 kappa] on the doubled region");
    std::vector<Parallelogram> out;
    zero_cover_rec(P, omega0, delta, 0, out);
    return out;
}

std::vector<int> grid_counts(const std::vector<Parallelogram>& pieces, double c, int n,
                             const std::array<double, 4>& dom) {
    std::vector<int> counts(static_cast<std::size_t>(n) * n, 0);
    const double hx = (dom[1] - dom[0]) / (n - 1), hy = (dom[3] - dom[2]) / (n - 1);
    for (const Parallelogram& p : pieces) {
        const Parallelogram d = dilate(p, c);
        const auto bb = bounding_box(d);
        const int i0 = std::max(0, static_cast<int>(std::floor((bb[0] - dom[0]) / hx)));
        const int i1 = std::min(n - 1, static_cast<int>(std::ceil((bb[1] - dom[0]) / hx)));
        const int j0 = std::max(0, static_cast<int>(std::floor((bb[2] - dom[2]) / hy)));
        const int j1 = std::min(n - 1, static_cast<int>(std::ceil((bb[3] - dom[2]) / hy)));
        for (int i = i0; i <= i1; ++i)
            for (int j = j0; j <= j1; ++j)
                if (contains(d, {dom[0] + hx * i, dom[2] + hy * j})) ++counts[static_cast<std::size_t>(j) * n + i];
    }
    return counts;
}

}  // namespace affdec
