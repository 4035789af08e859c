#pragma once

#include "affdec/poly.hpp"

namespace affdec {

/// ρ_θ = [[cos θ, sin θ], [−sin θ, cos θ]], sending (cos θ, sin θ) to e₁.
Mat2 split_rotation(double theta);

/// Q(ξ) = P(ρ_θ⁻¹ ξ).
Poly2 rotate_poly(const Poly2& p, double theta);

struct SplitResult {
    double theta = 0;
    Poly1 A;                   // in the rotated first coordinate
    Poly2 B;                   // residual / ‖residual‖ in rotated coordinates, zero if the residual vanishes
    double residual_norm = 0;  // ‖residual‖
    double achieved_alpha = 0; // log‖residual‖ / log ν, +∞ when the residual vanishes
};

/// P ∘ ρ_θ⁻¹ = A(ξ₁) + ‖r‖·B(ξ), with θ chosen to minimise ‖r‖.
/// Requires ‖P‖ ≤ 1, no constant or linear terms, and 0 < ν < 1.
SplitResult split_small_hessian(const Poly2& p, double nu, int grid_angles = 720);

/// A∘ρ_θ + ‖r‖·B∘ρ_θ as a polynomial in the original coordinates.
Poly2 reconstruct(const SplitResult& s);

}  // namespace affdec
