#include "affdec/decompose.hpp"

#include "affdec/errors.hpp"
#include "affdec/flat1d.hpp"
#include "affdec/range.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace affdec {

namespace {

struct Span {
    double a, b;
    bool merged = false;
};

// δ-flat partition of [lo,hi] for an arbitrary-norm A; the defect ignores affine terms.
std::vector<Span> scaled_partition(const Poly1& A, double delta, double lo, double hi) {
    const double c0 = 0.5 * (lo + hi);
    Poly1 B = A.compose_affine(1.0, c0);
    std::vector<double> cs = B.coeffs();
    if (cs.size() > 0) cs[0] = 0;
    if (cs.size() > 1) cs[1] = 0;
    B = Poly1(cs);
    const double norm = std::max(1.0, B.norm());
    const IntervalPartition part = flat_partition(B * (1 / norm), delta / norm, lo - c0, hi - c0);
    std::vector<Span> out;
    for (const Interval& iv : part.intervals) out.push_back({iv.a + c0, iv.b + c0});
    return out;
}

// Greedy left-to-right grouping until the built piece has width ≥ w_min.
template <class Make>
std::vector<Span> merge_by_width(const std::vector<Span>& spans, const Make& make, double w_min) {
    std::vector<Span> out;
    Span cur{0, 0};
    int members = 0;
    for (const Span& s : spans) {
        if (members == 0)
            cur = s;
        else
            cur.b = s.b;
        ++members;
        if (width(make(cur.a, cur.b)) >= w_min) {
            out.push_back({cur.a, cur.b, members > 1});
            members = 0;
        }
    }
    if (members > 0) {
        if (!out.empty()) {
            out.back().b = cur.b;
            out.back().merged = true;
        } else {
            out.push_back({cur.a, cur.b, true});
        }
    }
    return out;
}

// y-range of a convex polygon over the slab a ≤ x ≤ b.
std::optional<std::pair<double, double>> section(const std::array<Point2, 4>& poly, double a, double b) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    auto take = [&](double y) {
        lo = std::min(lo, y);
        hi = std::max(hi, y);
    };
    for (int i = 0; i < 4; ++i) {
        const Point2 p = poly[i], q = poly[(i + 1) % 4];
        if (p[0] >= a && p[0] <= b) take(p[1]);
        for (double x : {a, b}) {
            if ((p[0] - x) * (q[0] - x) < 0) take(p[1] + (q[1] - p[1]) * (x - p[0]) / (q[0] - p[0]));
        }
    }
    if (!(hi >= lo)) return std::nullopt;
    return std::make_pair(lo, hi);
}

int floor_exp_for(double x) { return static_cast<int>(std::floor(-std::log2(x))); }

}  // namespace

std::string to_string(StopReason r) {
    switch (r) {
        case StopReason::HReached: return "H_reached";
        case StopReason::WidthStop: return "width_stop";
        case StopReason::FlatCaseB: return "flat_case_b";
        case StopReason::TinyCurvature: return "tiny_curvature";
    }
    return "?";
}

StopReason stop_reason_from_string(const std::string& s) {
    for (StopReason r : {StopReason::HReached, StopReason::WidthStop, StopReason::FlatCaseB, StopReason::TinyCurvature})
        if (to_string(r) == s) return r;
    throw InvalidArgument("unknown stop reason '" + s + "'");
}

std::string to_string(Branch b) {
    switch (b) {
        case Branch::Root: return "root";
        case Branch::Iter: return "iter";
        case Branch::Stop: return "stop";
        case Branch::Refine: return "refine";
    }
    return "?";
}

Branch branch_from_string(const std::string& s) {
    for (Branch b : {Branch::Root, Branch::Iter, Branch::Stop, Branch::Refine})
        if (to_string(b) == s) return b;
    throw InvalidArgument("unknown branch '" + s + "'");
}

double sigma_of(int e) { return std::ldexp(1.0, -e); }

std::size_t DecompositionResult::leaf_count() const {
    std::size_t n = 0;
    for (const auto& [e, v] : families) n += v.size();
    return n;
}

std::vector<Parallelogram> DecompositionResult::parallelograms() const {
    std::vector<Parallelogram> out;
    for (const auto& [e, v] : families)
        for (const auto& l : v) out.push_back(l.omega);
    return out;
}

double containment_factor(const Parallelogram& inner, const Parallelogram& outer) {
    const AffineMap2 inv = outer.map.inverse();
    double c = 0;
    for (const Point2& p : inner.corners()) {
        const Point2 q = inv(p);
        c = std::max({c, std::abs(q[0]), std::abs(q[1])});
    }
    return c;
}

InductionOutput induction_step(const Poly2& phi, const Parallelogram& omega, double sigma, double R, double alpha,
                               double K) {
    InductionOutput out;
    out.H = h_quantity(phi, omega, sigma).certified;
    if (out.H >= 1 / K) {
        out.iter = {omega};
        return out;
    }
    const double s = std::min(sigma, 1.0);
    if (out.H < s * s * s) throw HPreconditionFails("H(omega) is below sigma^3");
    const Poly2 bar = normalize(recentred(phi, omega.map)).poly;
    out.split = split_small_hessian(bar, std::min(out.H, 0.5));
    out.delta = std::min(1.0, std::pow(out.H, alpha) + sigma);

    // z = ρξ; the preimage of Ω in z-coordinates is the rotated square U.
    const Mat2 rho = split_rotation(out.split.theta);
    const AffineMap2 to_world = omega.map.compose({rho.transpose(), {0, 0}});
    std::array<Point2, 4> U{rho.apply({-1, -1}), rho.apply({1, -1}), rho.apply({1, 1}), rho.apply({-1, 1})};
    double zl = U[0][0], zr = U[0][0];
    for (const auto& p : U) {
        zl = std::min(zl, p[0]);
        zr = std::max(zr, p[0]);
    }
    auto rect = [&](double a, double b) {
        auto sec = section(U, a, b);
        double lo = sec ? sec->first : 0, hi = sec ? sec->second : 0;
        const double need = 0.5 * (b - a);
        if (hi - lo < need) {
            const double mid = 0.5 * (lo + hi);
            lo = mid - need / 2;
            hi = mid + need / 2;
        }
        return std::make_pair(lo, hi);
    };
    // Intervals meeting U in less than half their length join the inward neighbour.
    auto thin = [&](const Span& s) {
        auto sec = section(U, s.a, s.b);
        return !sec || sec->second - sec->first < 0.5 * (s.b - s.a);
    };
    auto fold_ends = [&](std::vector<Span> v) {
        while (v.size() > 1 && thin(v.front())) {
            v[1].a = v[0].a;
            v.erase(v.begin());
        }
        while (v.size() > 1 && thin(v.back())) {
            v[v.size() - 2].b = v.back().b;
            v.pop_back();
        }
        return v;
    };
    auto world = [&](double a, double b, double lo, double hi) {
        return Parallelogram{to_world.compose(Parallelogram::box(a, b, lo, hi).map)};
    };
    auto world_strip = [&](double a, double b) {
        const auto [lo, hi] = rect(a, b);
        return world(a, b, lo, hi);
    };

    const double w_min = 1 / R;
    const auto first = merge_by_width(fold_ends(scaled_partition(out.split.A, out.delta, zl, zr)), world_strip, w_min);
    const Poly2 Q = rotate_poly(bar, out.split.theta);
    for (const Span& g : first) {
        if (g.merged) {
            out.stop.push_back(world_strip(g.a, g.b));
            continue;
        }
        const auto [lo, hi] = rect(g.a, g.b);
        const double h = 0.5 * (hi - lo), yc = 0.5 * (lo + hi);
        const Poly1 A2 = restrict_to_line(Q, {0, yc}, {1, 0});
        auto piece = [&](double a, double b) { return world(a, b, lo, hi); };
        for (const Span& g2 : merge_by_width(scaled_partition(A2, out.delta * h, g.a, g.b), piece, w_min))
            (g2.merged ? out.stop : out.iter).push_back(piece(g2.a, g2.b));
    }
    return out;
}

std::vector<Parallelogram> flat_strip_partition(const Poly2& phi, const Parallelogram& omega, double R) {
    Point2 u = omega.u(), v = omega.v();
    if (std::hypot(u[0], u[1]) < std::hypot(v[0], v[1])) std::swap(u, v);
    const double L = std::hypot(u[0], u[1]);
    const Point2 e{u[0] / L, u[1] / L}, c = omega.center();
    const Poly1 A = restrict_to_line(phi, c, e);
    std::vector<Parallelogram> out;
    for (const Span& s : scaled_partition(A, 1 / R, -L, L)) {
        const double m = 0.5 * (s.a + s.b), h = 0.5 * (s.b - s.a);
        out.push_back(Parallelogram::from_edges({c[0] + m * e[0], c[1] + m * e[1]}, {h * e[0], h * e[1]}, v));
    }
    return out;
}

namespace {

class Driver {
public:
    Driver(const Poly2& phi, DecompositionResult& res)
        : phi_(phi), det_(hessian_det(phi)), res_(res), R_(res.R), K_(res.cfg.K) {}

    void tiny(const Parallelogram& omega) {
        DecompositionLeaf leaf;
        leaf.omega = omega;
        leaf.sigma_exp = res_.tiny_exp;
        leaf.stop_reason = StopReason::TinyCurvature;
        try {
            const auto v = check_admissible(phi_, omega, sigma_of(res_.tiny_exp), R_, res_.consts);
            leaf.verdict = v.cls;
            leaf.w = v.w;
        } catch (const Error&) {
        }
        res_.families[leaf.sigma_exp].push_back(leaf);
    }

    void flat(const Parallelogram& omega, int e, StopReason reason, int node) {
        for (const Parallelogram& p : flat_strip_partition(phi_, omega, R_)) finalize_flat(p, e, reason, node, 0);
    }

    void root(const Parallelogram& omega, int e) {
        const int id = add_node(-1, Branch::Root, 0, omega, e);
        std::vector<int> work{id};
        while (!work.empty()) {
            const int n = work.back();
            work.pop_back();
            step(n, work);
        }
    }

private:
    int add_node(int parent, Branch b, int depth, const Parallelogram& omega, int e) {
        TreeNode t;
        t.id = static_cast<int>(res_.tree.size());
        t.parent = parent;
        t.branch = b;
        t.depth = depth;
        t.omega = omega;
        t.sigma_exp = e;
        if (parent >= 0) t.containment = containment_factor(omega, res_.tree[parent].omega);
        res_.tree.push_back(t);
        return t.id;
    }

    int refine_level(int n) const {
        int level = 0;
        for (int k = n; k >= 0 && res_.tree[k].branch == Branch::Refine; k = res_.tree[k].parent) ++level;
        return level;
    }

    void step(int n, std::vector<int>& work) {
        const TreeNode node = res_.tree[n];
        const double sigma = sigma_of(node.sigma_exp);
        double H = 0;
        try {
            H = h_quantity(phi_, node.omega, sigma).certified;
        } catch (const ZeroPolynomial&) {
            flat(node.omega, node.sigma_exp, StopReason::FlatCaseB, n);
            return;
        }
        res_.tree[n].H = H;
        if (H >= 1 / K_) {
            finalize_curved(n, work);
            return;
        }
        if (node.depth >= res_.cfg.max_steps) throw RecursionDepthExceeded("induction exceeded the step cap");
        InductionOutput out;
        try {
            out = induction_step(phi_, node.omega, sigma / res_.det_scale, R_, res_.cfg.alpha, K_);
        } catch (const HPreconditionFails&) {
            refine(n, work);
            return;
        } catch (const PreconditionFails&) {
            refine(n, work);
            return;
        }
        // Children are pushed in reverse so the worklist visits them in order.
        std::vector<int> kids;
        for (const auto& w : out.iter) kids.push_back(add_node(n, Branch::Iter, node.depth + 1, w, node.sigma_exp));
        for (const auto& w : out.stop) {
            const int c = add_node(n, Branch::Stop, node.depth + 1, w, node.sigma_exp);
            flat(w, node.sigma_exp, StopReason::WidthStop, c);
        }
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) work.push_back(*it);
    }

    void refine(int n, std::vector<int>& work) {
        const TreeNode node = res_.tree[n];
        if (refine_level(n) >= res_.cfg.max_refine)
            throw ValidationFailed("no admissible refinement of a case (a) piece centred at (" +
                                   std::to_string(node.omega.center()[0]) + ", " +
                                   std::to_string(node.omega.center()[1]) + ")");
        const Mat2& L = node.omega.map.linear;
        std::vector<int> kids;
        for (double sx : {-0.5, 0.5})
            for (double sy : {-0.5, 0.5}) {
                const Parallelogram q{{{L.a / 2, L.b / 2, L.c / 2, L.d / 2}, node.omega.map({sx, sy})}};
                kids.push_back(add_node(n, Branch::Refine, node.depth, q, node.sigma_exp));
            }
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) work.push_back(*it);
    }

    std::optional<AdmissibilityVerdict> admissible(const Parallelogram& p, int e) const {
        try {
            auto v = check_admissible(phi_, p, sigma_of(e), R_, res_.consts);
            if (v.cls != Admissibility::NotAdmissible) return v;
        } catch (const EnclosureTooLoose&) {
        } catch (const BudgetExceeded&) {
        }
        return std::nullopt;
    }

    void finalize_curved(int n, std::vector<int>& work) {
        const TreeNode& node = res_.tree[n];
        const RangeEnclosure r =
            abs_range(range_enclosure(det_, dilate(node.omega, 2), 1e-3 * sigma_of(node.sigma_exp)));
        int e0 = node.sigma_exp;
        if (r.lower > 0) e0 = static_cast<int>(std::lround(-0.5 * std::log2(r.lower * r.upper)));
        for (int e : {e0, e0 - 1, e0 + 1}) {
            if (e > res_.tiny_exp) continue;
            if (auto v = admissible(node.omega, e)) {
                DecompositionLeaf leaf{node.omega, e, v->cls, v->w, StopReason::HReached, n};
                if (v->cls == Admissibility::FlatAdmissible) leaf.stop_reason = StopReason::WidthStop;
                res_.families[e].push_back(leaf);
                return;
            }
        }
        refine(n, work);
    }

    void finalize_flat(const Parallelogram& p, int e, StopReason reason, int node, int level) {
        // Smallest σ' ≥ σ meeting the flat bound on the determinant.
        const double sup = det_.is_zero() ? 0.0 : sup_abs(det_, dilate(p, 2), 1e-3 * sigma_of(e));
        int e1 = e;
        if (sup > 0) e1 = std::min(e, floor_exp_for(sup / res_.consts.C1));
        for (int ee : {e1, e1 - 1}) {
            if (auto v = admissible(p, ee)) {
                res_.families[ee].push_back({p, ee, v->cls, v->w, reason, node});
                return;
            }
        }
        if (level >= res_.cfg.max_refine)
            throw ValidationFailed("flat piece centred at (" + std::to_string(p.center()[0]) + ", " +
                                   std::to_string(p.center()[1]) + ") is not admissible");
        Point2 u = p.u(), v = p.v();
        if (std::hypot(u[0], u[1]) < std::hypot(v[0], v[1])) std::swap(u, v);
        const Point2 c = p.center(), h{u[0] / 2, u[1] / 2};
        for (double s : {-1.0, 1.0})
            finalize_flat(Parallelogram::from_edges({c[0] + s * h[0], c[1] + s * h[1]}, h, v), e, reason, node,
                          level + 1);
    }

    const Poly2& phi_;
    Poly2 det_;
    DecompositionResult& res_;
    double R_, K_;
};

}  // namespace

DecompositionResult decompose(const Poly2& phi, double R, double eps, const DecomposeConfig& cfg) {
    if (!(R >= 1)) throw InvalidArgument("R must be at least 1");
    if (!(eps > 0 && eps <= 0.5)) throw InvalidArgument("eps must lie in (0, 1/2]");
    DecompositionResult res;
    res.R = R;
    res.eps = eps;
    res.cfg = cfg;
    res.consts = cfg.custom_constants ? cfg.consts : AdmissibilityConstants::defaults(eps);
    res.degree = std::max(phi.true_degree(), 2);

    SublevelOptions so;
    so.max_ratio = cfg.band_ratio;
    so.domain = cfg.domain;
    const SublevelCover cover = sublevel_cover(hessian_det(phi), R, eps, so);
    if (!cover.unclassified.empty()) throw ValidationFailed("sublevel cover left unclassified pieces");
    const int shift = static_cast<int>(std::lround(std::log2(cover.scale)));
    res.det_scale = cover.scale;
    res.tiny_exp = static_cast<int>(std::floor(6 * std::log2(R) + 1e-9));
    res.tiny_bound = so.dyadic_slack * cover.scale * SublevelCover::sigma(cover.k_max());

    Driver d(phi, res);
    for (const auto& [k, pieces] : cover.families)
        for (const CoverPiece& piece : pieces) {
            const int e = k - shift;
            switch (piece.size_case) {
                case SizeCase::C: d.tiny(piece.omega); break;
                case SizeCase::B: d.flat(piece.omega, e, StopReason::FlatCaseB, -1); break;
                case SizeCase::A: d.root(piece.omega, e); break;
            }
        }
    auto by_centre = [](const DecompositionLeaf& x, const DecompositionLeaf& y) {
        return x.omega.center() < y.omega.center();
    };
    for (auto& [e, v] : res.families) std::stable_sort(v.begin(), v.end(), by_centre);
    return res;
}

std::vector<TileResult> decompose_smooth(const DerivativeOracle& oracle, double R, double eps, double sigma, int d,
                                         double cd1_norm, const DecomposeConfig& cfg) {
    if (!(sigma > 0 && sigma <= 1)) throw InvalidArgument("sigma must lie in (0,1]");
    if (d < 2) throw InvalidArgument("Taylor degree must be at least 2");
    const int n = static_cast<int>(std::ceil(2 / std::pow(sigma, eps) - 1e-9));
    const double side = 2.0 / n;
    const int keep_exp = static_cast<int>(std::floor(-std::log2(sigma / 2) + 1e-9));
    std::vector<TileResult> out;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double x0 = -1 + side * i, y0 = -1 + side * j;
            TileResult t;
            t.tile = Parallelogram::box(x0, x0 + side, y0, y0 + side);
            t.taylor = taylor2(oracle, t.tile.center(), d);
            t.remainder_bound = cd1_norm * std::pow(sigma, eps * (d - 1));
            DecomposeConfig c = cfg;
            c.domain = {x0, x0 + side, y0, y0 + side};
            t.result = decompose(t.taylor, R, eps, c);
            for (auto it = t.result.families.begin(); it != t.result.families.end();)
                it = it->first > keep_exp ? t.result.families.erase(it) : std::next(it);
            out.push_back(std::move(t));
        }
    return out;
}

}  // namespace affdec
