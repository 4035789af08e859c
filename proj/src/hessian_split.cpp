#include "affdec/hessian_split.hpp"

#include "affdec/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace affdec {

Mat2 split_rotation(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {c, s, -s, c};
}

Poly2 rotate_poly(const Poly2& p, double theta) {
    return compose_affine(p, AffineMap2{split_rotation(theta).transpose(), {0, 0}});
}

namespace {

double residual_norm(const Poly2& q) {
    double m = 0.0;
    for (const auto& [e, c] : q.terms())
        if (e.second > 0) m = std::max(m, std::abs(c));
    return m;
}

double normalize_angle(double t) {
    const double pi = std::numbers::pi;
    t = std::fmod(t + pi / 2, pi);
    if (t < 0) t += pi;
    return t - pi / 2;
}

}  // namespace

SplitResult split_small_hessian(const Poly2& p, double nu, int grid_angles) {
    if (!(nu > 0 && nu < 1)) throw PreconditionFails("split_small_hessian needs 0 < nu < 1");
    if (coeff_norm(p) > 1.0 + 1e-12) throw PreconditionFails("split_small_hessian needs a bounded polynomial");
    if (p.coeff(0, 0) != 0 || p.coeff(1, 0) != 0 || p.coeff(0, 1) != 0)
        throw PreconditionFails("split_small_hessian needs a polynomial without constant or linear terms");
    if (grid_angles < 4) throw InvalidArgument("too few grid angles");

    const double pi = std::numbers::pi;
    auto f = [&](double t) { return residual_norm(rotate_poly(p, t)); };

    // Grid on [-π/2, π/2); strict comparison keeps the smallest angle on ties.
    const double h = pi / grid_angles;
    double best_t = -pi / 2, best_f = std::numeric_limits<double>::infinity();
    std::vector<double> values(grid_angles);
    for (int i = 0; i < grid_angles; ++i) {
        const double t = -pi / 2 + i * h;
        values[i] = f(t);
        if (values[i] < best_f) {
            best_f = values[i];
            best_t = t;
        }
    }

    // Golden-section refinement on [best − h, best + h].
    double a = best_t - h, b = best_t + h;
    const double g = (std::sqrt(5.0) - 1) / 2;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > 1e-13) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    const double refined = 0.5 * (a + b);
    const double fr = f(refined);
    if (fr < best_f) {
        best_f = fr;
        best_t = refined;
    }
    best_t = normalize_angle(best_t);

    SplitResult out;
    out.theta = best_t;
    const Poly2 q = rotate_poly(p, best_t);
    std::vector<double> a_coeffs(std::max(q.max_degree(), 0) + 1, 0.0);
    Poly2 r(q.max_degree());
    for (const auto& [e, c] : q.terms()) {
        if (e.second == 0)
            a_coeffs[e.first] = c;
        else
            r.set(e.first, e.second, c);
    }
    out.A = Poly1(a_coeffs);
    const double rn = coeff_norm(r);
    if (rn < 1e-12 * std::max(1.0, coeff_norm(p))) {
        out.residual_norm = 0.0;
        out.B = Poly2(q.max_degree());
        out.achieved_alpha = std::numeric_limits<double>::infinity();
        return out;
    }
    out.residual_norm = rn;
    out.B = r * (1.0 / rn);
    out.achieved_alpha = std::log(rn) / std::log(nu);
    return out;
}

Poly2 reconstruct(const SplitResult& s) {
    const Poly2 q = Poly2::from_poly1(s.A, 0) + s.B * s.residual_norm;
    return compose_affine(q, AffineMap2{split_rotation(s.theta), {0, 0}});
}

}  // namespace affdec
