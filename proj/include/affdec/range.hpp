#pragma once

#include "affdec/geometry.hpp"
#include "affdec/poly.hpp"

namespace affdec {

/// Certified bounds lower ≤ min P ≤ inner_lower and inner_upper ≤ max P ≤ upper.
/// The inner values are attained by P somewhere on the box.
struct RangeEnclosure {
    double lower = 0, upper = 0;
    double inner_lower = 0, inner_upper = 0;
    int subdivisions = 0;
};

inline constexpr int kDefaultSubdivisionCap = 200000;

/// Bernstein enclosure with branch-and-bound refinement until
/// inner_lower − lower ≤ tol and upper − inner_upper ≤ tol.
RangeEnclosure range_enclosure(const Poly2& p, const Parallelogram& box, double tol,
                               int max_subdivisions = kDefaultSubdivisionCap);

/// Enclosure of |P| derived from an enclosure of P.
RangeEnclosure abs_range(const RangeEnclosure& r);

/// sup |P| on the box, certified from above.
double sup_abs(const Poly2& p, const Parallelogram& box, double tol);

/// +1 if P > 0 on the box, −1 if P < 0, 0 if undecided within the budget.
int certified_sign(const Poly2& p, const Parallelogram& box, int max_subdivisions = 2000);

}  // namespace affdec
