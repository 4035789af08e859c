#include "affdec/flat1d.hpp"

#include "affdec/errors.hpp"
#include "affdec/range.hpp"

#include <algorithm>
#include <cmath>

namespace affdec {

namespace {

// D(x,y) = P(x) − P(y) − P'(y)(x − y)
Poly2 defect_poly(const Poly1& p) {
    const Poly2 px = Poly2::from_poly1(p, 0);
    const Poly2 py = Poly2::from_poly1(p, 1);
    const Poly2 dpy = Poly2::from_poly1(p.derivative(), 1);
    Poly2 diff(1);
    diff.set(1, 0, 1.0);
    diff.set(0, 1, -1.0);
    return px - py - dpy * diff;
}

double defect_of(const Poly2& d, double a, double b, double tol) {
    if (d.is_zero()) return 0.0;
    return sup_abs(d, Parallelogram::box(a, b, a, b), tol);
}

}  // namespace

double flatness_defect(const Poly1& p, double a, double b, double tol) {
    if (!(b > a)) throw InvalidArgument("flatness defect needs a nonempty interval");
    const Poly2 d = defect_poly(p);
    if (tol <= 0) tol = 1e-10 * std::max(1.0, coeff_norm(d));
    return defect_of(d, a, b, tol);
}

IntervalPartition flat_partition(const Poly1& p, double delta, double lo, double hi) {
    if (!(delta > 0)) throw InvalidArgument("delta must be positive");
    if (!(hi > lo)) throw InvalidArgument("empty partition domain");
    if (p.norm() > 1.0 + 1e-12) throw NotBounded("flat_partition requires a polynomial with norm at most 1");
    const Poly2 d = defect_poly(p);
    const double tol = 1e-4 * delta;

    IntervalPartition out;
    out.delta = delta;
    if (delta >= 1.0) {
        out.intervals.push_back({lo, hi, false, defect_of(d, lo, hi, tol)});
        return out;
    }
    const double floor = 1e-9 * (hi - lo);
    std::vector<Interval> stack{{lo, hi}};
    while (!stack.empty()) {
        Interval iv = stack.back();
        stack.pop_back();
        iv.defect = defect_of(d, iv.a, iv.b, tol);
        if (iv.defect <= delta * (1 + 1e-12)) {
            out.intervals.push_back(iv);
            continue;
        }
        if (iv.length() < floor) throw BudgetExceeded("flat partition bisection below resolution floor");
        const double m = 0.5 * (iv.a + iv.b);
        ++out.bisections;
        stack.push_back({m, iv.b});
        stack.push_back({iv.a, m});
    }
    std::sort(out.intervals.begin(), out.intervals.end(), [](const Interval& x, const Interval& y) { return x.a < y.a; });
    return out;
}

IntervalPartition merge_to_min_width(const IntervalPartition& part, double w_min) {
    if (!(w_min > 0)) throw InvalidArgument("w_min must be positive");
    IntervalPartition out;
    out.delta = part.delta;
    out.bisections = part.bisections;
    out.merges = part.merges;

    Interval group;
    int members = 0;
    for (const Interval& iv : part.intervals) {
        if (members == 0) {
            group = iv;
        } else {
            group.b = iv.b;
            group.stop = true;
            group.defect = std::max(group.defect, iv.defect);
            ++out.merges;
        }
        ++members;
        if (group.length() >= w_min) {
            out.intervals.push_back(group);
            members = 0;
        }
    }
    if (members > 0) {
        if (!out.intervals.empty()) {
            Interval& last = out.intervals.back();
            last.b = group.b;
            last.stop = true;
            last.defect = std::max(last.defect, group.defect);
            ++out.merges;
        } else {
            out.intervals.push_back(group);
        }
    }
    return out;
}

}  // namespace affdec
