#pragma once

#include "affdec/poly.hpp"

#include <array>
#include <string>
#include <vector>

namespace affdec {

/// Affine image T(ξ) = Lξ + b of [-1,1]².
struct Parallelogram {
    AffineMap2 map;

    Point2 center() const { return map.shift; }
    Point2 u() const { return {map.linear.a, map.linear.c}; }
    Point2 v() const { return {map.linear.b, map.linear.d}; }
    double area() const;
    std::array<Point2, 4> corners() const;

    static Parallelogram unit_square() { return {}; }
    static Parallelogram box(double x0, double x1, double y0, double y1);
    static Parallelogram from_edges(const Point2& center, const Point2& u, const Point2& v);
};

double width(const Parallelogram& omega);
Parallelogram dilate(const Parallelogram& omega, double c);
/// T⁻¹ξ ∈ [-1,1]², boundary inclusive up to `slack` in the unit frame.
bool contains(const Parallelogram& omega, const Point2& xi, double slack = 1e-12);
/// Axis-aligned bounding box [x0,x1]×[y0,y1].
std::array<double, 4> bounding_box(const Parallelogram& omega);
/// Closed parallelograms share a point (separating-axis test).
bool intersects(const Parallelogram& a, const Parallelogram& b);

/// (ξ,η) ∈ N^φ_δ(A) where A is a union of parallelograms.
bool in_neighborhood(const Poly2& phi, const std::vector<Parallelogram>& region, double delta,
                     const Point2& xi, double eta);

struct AdmissibilityConstants {
    double C1 = 4, C2 = 4;
    double c3 = 0.25, C3 = 4;
    double c4 = 0, C4 = 0, C5 = 0;
    /// Relative slack when comparing a certified value against a threshold.
    double rel_slack = 1e-9;

    static AdmissibilityConstants defaults(double eps);
};

enum class Admissibility { FlatAdmissible, CurvedAdmissible, NotAdmissible };
std::string to_string(Admissibility a);

struct AdmissibilityWitnesses {
    double det_sup_2omega = 0;      // sup |det D²φ| on 2Ω
    double det_inf_2omega = 0;      // inf |det D²φ| on 2Ω
    double phi_t_norm = 0;          // ‖φ_{T_Ω}‖
    double bar_det_inf = 0;         // inf |det D²φ̄_{T_Ω}| on [-1,1]²
    double bar_det_sup = 0;
    double bar_deriv_sup = 0;       // sup Σ_{|α|=2,3} |D^α φ̄_{T_Ω}|
};

struct AdmissibilityVerdict {
    Admissibility cls = Admissibility::NotAdmissible;
    AdmissibilityWitnesses w;
};

AdmissibilityVerdict check_admissible(const Poly2& phi, const Parallelogram& omega, double sigma, double R,
                                      const AdmissibilityConstants& consts);

struct HQuantity {
    double certified;  // lower end of the enclosure of |det D²φ̄_{T_Ω}| on [-1,1]²
    double surrogate;  // ‖φ_{T_Ω}‖⁻² |Ω|² σ
};
HQuantity h_quantity(const Poly2& phi, const Parallelogram& omega, double sigma);

}  // namespace affdec
