#include "affdec/measures.hpp"

#include "affdec/errors.hpp"
#include "affdec/range.hpp"

#include <cmath>
#include <limits>
#include <queue>

namespace affdec {

namespace {

double density_from_det(double det, double e) {
    if (e == 0) return 1;
    const double a = std::abs(det);
    if (a == 0) return e > 0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::pow(a, e);
}

// 4-point Gauss–Legendre on [-1,1]; no node sits on a cell's centre lines.
constexpr double kNodes[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
constexpr double kWeights[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};

struct Box {
    double x0, x1, y0, y1;
    double area() const { return (x1 - x0) * (y1 - y0); }
};

double gauss_mean(const Poly2& det, double e, const Box& b) {
    double acc = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const Point2 p{0.5 * (b.x0 + b.x1) + 0.5 * (b.x1 - b.x0) * kNodes[i],
                           0.5 * (b.y0 + b.y1) + 0.5 * (b.y1 - b.y0) * kNodes[j]};
            acc += kWeights[i] * kWeights[j] * density_from_det(det(p), e);
        }
    return acc / 4;
}

struct Leaf {
    Box box;
    bool split_x;
    double integral, error;
    bool operator<(const Leaf& o) const { return error < o.error; }
};

// Estimates both bisections and keeps the one that moves the value most. Sides below `min_side`
// are not split further; a leaf with both sides below it is final.
Leaf make_leaf(const Poly2& det, double e, const Box& b, double min_side) {
    const double area = b.area();
    const double coarse = gauss_mean(det, e, b);
    const double xm = 0.5 * (b.x0 + b.x1), ym = 0.5 * (b.y0 + b.y1);
    const bool can_x = b.x1 - b.x0 >= min_side, can_y = b.y1 - b.y0 >= min_side;
    const double gx = can_x ? 0.5 * (gauss_mean(det, e, {b.x0, xm, b.y0, b.y1}) + gauss_mean(det, e, {xm, b.x1, b.y0, b.y1}))
                            : coarse;
    const double gy = can_y ? 0.5 * (gauss_mean(det, e, {b.x0, b.x1, b.y0, ym}) + gauss_mean(det, e, {b.x0, b.x1, ym, b.y1}))
                            : coarse;
    const double dx = std::abs(gx - coarse), dy = std::abs(gy - coarse);
    const bool split_x = can_x && (!can_y || !(dy > dx));
    const double fine = split_x ? gx : gy;
    if (!can_x && !can_y) return {b, true, std::isfinite(coarse) ? coarse * area : 0.0, 0};
    const double err = std::isfinite(fine) && std::isfinite(coarse) ? std::max(dx, dy) * area
                                                                     : std::numeric_limits<double>::infinity();
    return {b, split_x, fine * area, err};
}

// Global adaptive cubature: always bisect the leaf with the largest error estimate. The estimate
// |fine − coarse| understates the error of a self-similar singular leaf by about 1/(√2 − 1).
double cell_mean(const Poly2& det, double e, const Point2& xi, double side) {
    constexpr std::size_t kMaxLeaves = 1 << 12;
    const double h = side / 2;
    const Box root{xi[0] - h, xi[0] + h, xi[1] - h, xi[1] + h};
    std::priority_queue<Leaf> heap;
    const double min_side = side * 1e-12;
    heap.push(make_leaf(det, e, root, min_side));
    // Leaves with a non-finite value carry no integral and count as unresolved.
    auto part = [](const Leaf& l) { return std::isfinite(l.error) ? l.integral : 0.0; };
    auto err = [](const Leaf& l) { return std::isfinite(l.error) ? l.error : 0.0; };
    std::size_t unresolved = std::isfinite(heap.top().error) ? 0 : 1;
    double integral = part(heap.top()), error = err(heap.top());
    while (unresolved > 0 || !(error <= 2.5e-4 * std::abs(integral))) {
        if (heap.size() >= kMaxLeaves) {
            if (unresolved > 0) throw QuadratureNonConvergent("cell density did not converge");
            break;
        }
        const Leaf top = heap.top();
        heap.pop();
        const Box& b = top.box;
        Box lo = b, hi = b;
        if (top.split_x) lo.x1 = hi.x0 = 0.5 * (b.x0 + b.x1);
        else lo.y1 = hi.y0 = 0.5 * (b.y0 + b.y1);
        for (const Leaf& child : {make_leaf(det, e, lo, min_side), make_leaf(det, e, hi, min_side)}) {
            heap.push(child);
            integral += part(child);
            error += err(child);
            if (!std::isfinite(child.error)) ++unresolved;
        }
        integral -= part(top);
        error -= err(top);
        if (!std::isfinite(top.error)) --unresolved;
    }
    return integral / root.area();
}

}  // namespace

MeasureSpec MeasureSpec::from_preset(const std::string& name, double eps) {
    if (name == "surface_measure") return surface_measure();
    if (name == "affine") return affine();
    if (name == "affine_damped") return affine_damped(eps);
    if (name == "M") return M();
    if (name == "M_damped" || name == "Meps") return M_damped(eps);
    if (name == "lebesgue_pullback") return lebesgue_pullback();
    throw InvalidArgument("unknown measure preset '" + name + "'");
}

double density(const Poly2& phi, const MeasureSpec& spec, const Point2& xi) {
    return density_from_det(hessian_det(phi)(xi), spec.exponent);
}

double cell_density(const Poly2& phi, const MeasureSpec& spec, const Point2& xi, double side) {
    if (!(side > 0)) return density(phi, spec, xi);
    return cell_mean(hessian_det(phi), spec.exponent, xi, side);
}

void check_support(const FourierData& f, const Poly2& phi, double R, const Parallelogram& region) {
    for (std::size_t i = 0; i < f.nodes.size(); ++i) {
        const auto& node = f.nodes[i];
        if (!(std::abs(node.eta - phi(node.xi)) < 1 / R) || !contains(region, node.xi))
            throw NodeOutsideSupport("node " + std::to_string(i) + " lies outside the declared neighbourhood");
    }
}

double l2_norm_dM(const FourierData& f, const Poly2& phi, const MeasureSpec& spec) {
    const Poly2 det = hessian_det(phi);
    double acc = 0;
    for (const auto& node : f.nodes) {
        const double mass = std::norm(node.amp) * node.volume;
        if (mass == 0) continue;
        double w;
        if (spec.exponent != 0 && node.cell > 0) {
            // Cells straddling {det = 0} are averaged; others use the centre value.
            const double h = node.cell / 2;
            const Parallelogram box = Parallelogram::box(node.xi[0] - h, node.xi[0] + h, node.xi[1] - h, node.xi[1] + h);
            const RangeEnclosure r = det.is_zero() ? RangeEnclosure{} : range_enclosure(det, box, 1e-12);
            const bool straddles = r.lower <= 0 && r.upper >= 0;
            w = straddles ? cell_mean(det, spec.exponent, node.xi, node.cell)
                          : density_from_det(det(node.xi), spec.exponent);
        } else {
            w = density_from_det(det(node.xi), spec.exponent);
        }
        acc += mass * w;
    }
    return std::sqrt(acc);
}

Point3 NeighbourhoodMap::apply(const Point3& z) const {
    const Point2 x = T({z[0], z[1]});
    return {x[0], x[1], s * z[2] + c0 + g[0] * z[0] + g[1] * z[1]};
}

Point3 NeighbourhoodMap::inverse(const Point3& w) const {
    const Point2 xi = T.inverse()({w[0], w[1]});
    return {xi[0], xi[1], (w[2] - c0 - g[0] * xi[0] - g[1] * xi[1]) / s};
}

Point3 NeighbourhoodMap::transpose_apply(const Point3& x) const {
    const Mat2& L = T.linear;
    return {L.a * x[0] + L.c * x[1] + g[0] * x[2], L.b * x[0] + L.d * x[1] + g[1] * x[2], s * x[2]};
}

NeighbourhoodMap neighbourhood_map(const Poly2& phi, const Parallelogram& omega, double s) {
    if (!(s > 0)) throw InvalidArgument("s must be positive");
    NeighbourhoodMap L;
    L.T = omega.map;
    L.s = s;
    const Point2 c = omega.center();
    L.c0 = phi(c);
    const Point2 grad{derivative(phi, 1, 0)(c), derivative(phi, 0, 1)(c)};
    const Mat2& M = omega.map.linear;
    L.g = {M.a * grad[0] + M.c * grad[1], M.b * grad[0] + M.d * grad[1]};
    return L;
}

FourierData pull_back(const FourierData& f, const NeighbourhoodMap& L) {
    const double jac = std::abs(L.det());
    FourierData out;
    out.nodes.reserve(f.nodes.size());
    const double cell_scale = std::sqrt(std::abs(L.T.linear.det()));
    for (const auto& node : f.nodes) {
        const Point3 z = L.inverse({node.xi[0], node.xi[1], node.eta});
        FourierNode g = node;
        g.xi = {z[0], z[1]};
        g.eta = z[2];
        g.volume = node.volume / jac;
        g.cell = node.cell / cell_scale;
        out.nodes.push_back(g);
    }
    return out;
}

InvarianceReport affine_invariance(const FourierData& f, const Poly2& phi, const Parallelogram& omega, double s,
                                   double R, int n) {
    if (!(s >= 1 / R * (1 - 1e-12) && s <= 1)) throw InvalidArgument("s must lie in [1/R, 1]");
    const SynthesisGrid grid{{0, 0, 0}, R, n};
    const MeasureSpec M = MeasureSpec::M();

    const double f_l4 = lp_norm(synthesize(f, grid), 4, Weight::SharpBall);
    const double f_l2 = l2_norm_dM(f, phi, M);

    const NeighbourhoodMap L = neighbourhood_map(phi, omega, s);
    const FourierData g = pull_back(f, L);
    const Poly2 bar = recentred(phi, omega.map) * (1 / s);
    // ‖G‖_{L⁴(L(B_R))}: substitute x = Lᵀy over the ball grid.
    std::vector<Point3> pts;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const Point3 y = grid.point(i, j, k);
                if (std::hypot(y[0], y[1], y[2]) <= R) pts.push_back(L.transpose_apply(y));
            }
    const auto gv = synthesize_at(g, pts);
    double acc = 0;
    for (const Complex& v : gv) acc += std::pow(std::abs(v), 4);
    const double g_l4 = std::pow(acc * std::abs(L.det()) * std::pow(grid.spacing(), 3), 0.25);
    const double g_l2 = l2_norm_dM(g, bar, M);

    InvarianceReport rep;
    rep.lhs = f_l2 > 0 ? f_l4 / (f_l2 / std::sqrt(R)) : 0;
    rep.rhs = g_l2 > 0 ? g_l4 / (g_l2 / std::sqrt(s * R)) : 0;
    rep.residual = rep.rhs > 0 ? std::abs(rep.lhs / rep.rhs - 1) : (rep.lhs == 0 ? 0 : 1);
    return rep;
}

double affine_invariance_residual(const FourierData& f, const Poly2& phi, const Parallelogram& omega, double s,
                                  double R, int n) {
    return affine_invariance(f, phi, omega, s, R, n).residual;
}

}  // namespace affdec
