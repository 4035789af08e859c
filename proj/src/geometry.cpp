#include "affdec/geometry.hpp"

#include "affdec/errors.hpp"
#include "affdec/range.hpp"

#include <algorithm>
#include <cmath>

namespace affdec {

double Parallelogram::area() const { return 4.0 * std::abs(map.linear.det()); }

std::array<Point2, 4> Parallelogram::corners() const {
    return {map({-1, -1}), map({1, -1}), map({1, 1}), map({-1, 1})};
}

Parallelogram Parallelogram::box(double x0, double x1, double y0, double y1) {
    return {{Mat2::diag((x1 - x0) / 2, (y1 - y0) / 2), {(x0 + x1) / 2, (y0 + y1) / 2}}};
}

Parallelogram Parallelogram::from_edges(const Point2& center, const Point2& u, const Point2& v) {
    return {{{u[0], v[0], u[1], v[1]}, center}};
}

double width(const Parallelogram& omega) {
    const double det = omega.map.linear.det();
    if (det == 0.0) throw DegenerateParallelogram("parallelogram has zero area");
    const double lu = std::hypot(omega.u()[0], omega.u()[1]);
    const double lv = std::hypot(omega.v()[0], omega.v()[1]);
    return 2.0 * std::abs(det) / std::max(lu, lv);
}

Parallelogram dilate(const Parallelogram& omega, double c) {
    if (!(c > 0)) throw InvalidArgument("dilation factor must be positive");
    const Mat2& L = omega.map.linear;
    return {{{c * L.a, c * L.b, c * L.c, c * L.d}, omega.map.shift}};
}

bool contains(const Parallelogram& omega, const Point2& xi, double slack) {
    const Mat2& L = omega.map.linear;
    const double det = L.det();
    if (det == 0.0) throw DegenerateParallelogram("parallelogram has zero area");
    const double dx = xi[0] - omega.map.shift[0], dy = xi[1] - omega.map.shift[1];
    const double s = (L.d * dx - L.b * dy) / det;
    const double t = (-L.c * dx + L.a * dy) / det;
    return std::abs(s) <= 1.0 + slack && std::abs(t) <= 1.0 + slack;
}

std::array<double, 4> bounding_box(const Parallelogram& omega) {
    const Mat2& L = omega.map.linear;
    const double hx = std::abs(L.a) + std::abs(L.b), hy = std::abs(L.c) + std::abs(L.d);
    const Point2 c = omega.center();
    return {c[0] - hx, c[0] + hx, c[1] - hy, c[1] + hy};
}

bool intersects(const Parallelogram& a, const Parallelogram& b) {
    const auto ca = a.corners(), cb = b.corners();
    auto separated = [&](const Point2& axis) {
        double amin = 1e300, amax = -1e300, bmin = 1e300, bmax = -1e300;
        for (const auto& p : ca) {
            const double d = p[0] * axis[0] + p[1] * axis[1];
            amin = std::min(amin, d);
            amax = std::max(amax, d);
        }
        for (const auto& p : cb) {
            const double d = p[0] * axis[0] + p[1] * axis[1];
            bmin = std::min(bmin, d);
            bmax = std::max(bmax, d);
        }
        return amax < bmin || bmax < amin;
    };
    // Edge normals of both parallelograms.
    for (const Parallelogram* o : {&a, &b}) {
        const Point2 u = o->u(), v = o->v();
        if (separated({-u[1], u[0]}) || separated({-v[1], v[0]})) return false;
    }
    return true;
}

bool in_neighborhood(const Poly2& phi, const std::vector<Parallelogram>& region, double delta, const Point2& xi,
                     double eta) {
    if (std::abs(eta - phi(xi)) >= delta) return false;
    return std::any_of(region.begin(), region.end(), [&](const Parallelogram& o) { return contains(o, xi, 0.0); });
}

AdmissibilityConstants AdmissibilityConstants::defaults(double eps) {
    AdmissibilityConstants k;
    k.c4 = eps * eps / 100.0;
    k.C4 = 100.0 / (eps * eps);
    k.C5 = 100.0 / (eps * eps);
    return k;
}

std::string to_string(Admissibility a) {
    switch (a) {
        case Admissibility::FlatAdmissible: return "FlatAdmissible";
        case Admissibility::CurvedAdmissible: return "CurvedAdmissible";
        case Admissibility::NotAdmissible: return "NotAdmissible";
    }
    return "NotAdmissible";
}

namespace {

enum class Tri { Yes, No, Unknown };

Tri at_most(const RangeEnclosure& r, double thr, double rel) {
    const double t = thr * (1 + rel);
    if (r.upper <= t) return Tri::Yes;
    if (r.inner_upper > t) return Tri::No;
    return Tri::Unknown;
}

Tri at_least(const RangeEnclosure& r, double thr, double rel) {
    const double t = thr * (1 - rel);
    if (r.lower >= t) return Tri::Yes;
    if (r.inner_lower < t) return Tri::No;
    return Tri::Unknown;
}

Tri both(Tri a, Tri b) {
    if (a == Tri::No || b == Tri::No) return Tri::No;
    if (a == Tri::Yes && b == Tri::Yes) return Tri::Yes;
    return Tri::Unknown;
}

// |P| range, retried once with a much tighter tolerance when `decide` is undecided.
template <class Decide>
std::pair<RangeEnclosure, Tri> decided_abs_range(const Poly2& p, const Parallelogram& box, double tol, Decide decide) {
    RangeEnclosure r = abs_range(range_enclosure(p, box, tol));
    Tri t = decide(r);
    if (t == Tri::Unknown) {
        r = abs_range(range_enclosure(p, box, tol * 1e-4));
        t = decide(r);
    }
    return {r, t};
}

bool resolve(Tri t, const char* what) {
    if (t == Tri::Unknown) throw EnclosureTooLoose(std::string("certified range straddles the threshold for ") + what);
    return t == Tri::Yes;
}

const std::array<Exponent, 7> kSecondThird{{{2, 0}, {1, 1}, {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3}}};

}  // namespace

AdmissibilityVerdict check_admissible(const Poly2& phi, const Parallelogram& omega, double sigma, double R,
                                      const AdmissibilityConstants& k) {
    if (!(sigma > 0)) throw InvalidArgument("sigma must be positive");
    if (!(R >= 1)) throw InvalidArgument("R must be at least 1");
    width(omega);
    AdmissibilityVerdict v;
    const double rel = k.rel_slack;
    const Parallelogram twice = dilate(omega, 2.0);
    const Poly2 det = hessian_det(phi);

    // Hessian determinant on 2Ω against the curved band and the flat bound.
    const double det_tol = 1e-3 * std::min(k.c3, k.C1) * sigma;
    auto [det_range, det_band] = decided_abs_range(det, twice, det_tol, [&](const RangeEnclosure& r) {
        return both(at_least(r, k.c3 * sigma, rel), at_most(r, k.C3 * sigma, rel));
    });
    v.w.det_sup_2omega = det_range.upper;
    v.w.det_inf_2omega = det_range.lower;

    const Poly2 phi_t = recentred(phi, omega.map);
    v.w.phi_t_norm = coeff_norm(phi_t);

    bool curved = false;
    if (!phi_t.is_zero()) {
        const Poly2 bar = normalize(phi_t).poly;
        const Parallelogram unit = Parallelogram::unit_square();
        auto [bar_range, bar_band] =
            decided_abs_range(hessian_det(bar), unit, 1e-3 * k.c4, [&](const RangeEnclosure& r) {
                return both(at_least(r, k.c4, rel), at_most(r, k.C4, rel));
            });
        v.w.bar_det_inf = bar_range.lower;
        v.w.bar_det_sup = bar_range.upper;

        // Σ|D^α φ̄| is bounded termwise; an attained value comes from a sample grid.
        double sum_sup = 0.0;
        std::vector<Poly2> ders;
        for (const auto& [a1, a2] : kSecondThird) {
            ders.push_back(derivative(bar, a1, a2));
            sum_sup += sup_abs(ders.back(), unit, 1e-6 * k.C5);
        }
        double sum_attained = 0.0;
        for (int i = 0; i <= 8; ++i)
            for (int j = 0; j <= 8; ++j) {
                const Point2 x{-1 + i / 4.0, -1 + j / 4.0};
                double s = 0.0;
                for (const auto& d : ders) s += std::abs(d(x));
                sum_attained = std::max(sum_attained, s);
            }
        v.w.bar_deriv_sup = sum_sup;
        Tri deriv_ok = sum_sup <= k.C5 * (1 + rel) ? Tri::Yes : (sum_attained > k.C5 * (1 + rel) ? Tri::No : Tri::Unknown);

        const Tri c = both(det_band, both(bar_band, deriv_ok));
        curved = (c == Tri::No) ? false : resolve(c, "curved admissibility");
    }
    if (curved) {
        v.cls = Admissibility::CurvedAdmissible;
        return v;
    }

    Tri flat_det = at_most(det_range, k.C1 * sigma, rel);
    if (flat_det == Tri::Unknown) {
        const RangeEnclosure r = abs_range(range_enclosure(det, twice, det_tol * 1e-4));
        flat_det = at_most(r, k.C1 * sigma, rel);
    }
    const bool flat_norm = v.w.phi_t_norm <= (k.C2 / R) * (1 + rel);
    if (flat_norm && resolve(flat_det, "flat admissibility"))
        v.cls = Admissibility::FlatAdmissible;
    else
        v.cls = Admissibility::NotAdmissible;
    return v;
}

HQuantity h_quantity(const Poly2& phi, const Parallelogram& omega, double sigma) {
    const Poly2 phi_t = recentred(phi, omega.map);
    const Normalized n = normalize(phi_t);
    const Poly2 det = hessian_det(n.poly);
    const double tol = 1e-9 * std::max(1.0, coeff_norm(det));
    const RangeEnclosure r = abs_range(range_enclosure(det, Parallelogram::unit_square(), tol));
    const double area = omega.area();
    return {std::max(r.lower, 0.0), area * area * sigma / (n.scale * n.scale)};
}

}  // namespace affdec
