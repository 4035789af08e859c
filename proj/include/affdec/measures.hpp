#pragma once

#include "affdec/fourier.hpp"
#include "affdec/geometry.hpp"
#include "affdec/poly.hpp"

#include <string>

namespace affdec {

/// Density |det D²φ|^e against dξ (or dξdη).
struct MeasureSpec {
    std::string preset = "affine";
    double eps = 0;
    double exponent = 0.25;

    static MeasureSpec surface_measure() { return {"surface_measure", 0, 0}; }
    static MeasureSpec affine() { return {"affine", 0, 0.25}; }
    static MeasureSpec affine_damped(double eps) { return {"affine_damped", eps, 0.25 + eps}; }
    static MeasureSpec M() { return {"M", 0, -0.25}; }
    static MeasureSpec M_damped(double eps) { return {"M_damped", eps, -0.25 - eps}; }
    static MeasureSpec lebesgue_pullback() { return {"lebesgue_pullback", 0, -0.25}; }
    static MeasureSpec from_preset(const std::string& name, double eps = 0);
};

/// |det D²φ(ξ)|^e; 0 at Hessian zeros when e > 0, +∞ when e < 0.
double density(const Poly2& phi, const MeasureSpec& spec, const Point2& xi);

/// Mean of the density over the square of side `side` centred at ξ, refined adaptively
/// to relative 1e-3 where the density is singular.
double cell_density(const Poly2& phi, const MeasureSpec& spec, const Point2& xi, double side);

/// Throws NodeOutsideSupport unless every node has |η − φ(ξ)| < R^{-1} and ξ in the region.
void check_support(const FourierData& f, const Poly2& phi, double R, const Parallelogram& region);

/// (Σ |a|² v · density)^{1/2}; nodes with singular density use their cell average.
double l2_norm_dM(const FourierData& f, const Poly2& phi, const MeasureSpec& spec);

/// L(ξ,η) = (Tξ, sη + c₀ + g·ξ): maps the (sR)^{-1} neighbourhood of φ̄ = s^{-1}φ_T over [-1,1]²
/// onto the R^{-1} neighbourhood of φ over Ω.
struct NeighbourhoodMap {
    AffineMap2 T;
    double s = 1;
    double c0 = 0;
    Point2 g{0, 0};

    Point3 apply(const Point3& z) const;
    Point3 inverse(const Point3& w) const;
    /// Transpose of the linear part, applied to a physical-space point.
    Point3 transpose_apply(const Point3& x) const;
    double det() const { return s * T.linear.det(); }
};
NeighbourhoodMap neighbourhood_map(const Poly2& phi, const Parallelogram& omega, double s);

/// Ĝ = F̂∘L as node data: nodes L^{-1}(ξ,η), cell volumes divided by |det L|.
FourierData pull_back(const FourierData& f, const NeighbourhoodMap& L);

struct InvarianceReport {
    double lhs = 0, rhs = 0, residual = 0;
};

/// Both sides of ‖F‖_{L⁴(B_R)}/(R^{-1/2}‖F̂‖_{L²(dM^φ)}) = ‖G‖_{L⁴(L(B_R))}/((sR)^{-1/2}‖Ĝ‖_{L²(dM^φ̄)}),
/// each synthesized from its own node set on an n³ grid.
InvarianceReport affine_invariance(const FourierData& f, const Poly2& phi, const Parallelogram& omega, double s,
                                   double R, int n);
double affine_invariance_residual(const FourierData& f, const Poly2& phi, const Parallelogram& omega, double s,
                                  double R, int n);

}  // namespace affdec
