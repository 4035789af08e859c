#pragma once

#include "affdec/geometry.hpp"
#include "affdec/poly.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace affdec {

/// Orthonormal frame ξ = origin + t·e_t + s·e_s together with a rectangle
/// [t0,t1]×[s0,s1] in frame coordinates.
struct FrameRect {
    Point2 origin{0, 0};
    Point2 e_s{0, 1};
    double t0 = -1, t1 = 1, s0 = -1, s1 = 1;

    Point2 e_t() const { return {e_s[1], -e_s[0]}; }
    AffineMap2 to_world() const;
    /// Smallest frame rectangle containing `omega`, with e_s = unit(dir).
    static FrameRect around(const Parallelogram& omega, const Point2& dir);
};

/// Certified derivative bounds of Q = P∘frame on the frame rectangle.
struct MonotoneBounds {
    double ds_min = 0, ds_max = 0;  // range of ∂_s Q
    double dt_max = 0;              // sup |∂_t Q|
    double g2 = 0;                  // bound on |g''| for level curves s = g(t)
};

/// Bounds when ∂_s Q > 0 with ds_max ≤ max_ratio·ds_min and dt_max ≤ max_slope·ds_min.
std::optional<MonotoneBounds> certify_monotone(const Poly2& q, const FrameRect& r, double max_ratio,
                                               double max_slope);

/// Piece acceptor: returns false to ask for a shorter piece.
using PieceAcceptor = std::function<bool(const Parallelogram& world_piece)>;

struct BandCoverOptions {
    /// Split a t-interval while the piece is thicker than this multiple of the band.
    double thickness_factor = 1.5;
    /// Lower bound on the s-thickness of every piece.
    double min_thickness = 0;
    int max_pieces = 20000;
};

/// Covers {ξ ∈ rect : vl ≤ P(ξ) ≤ vh} (vl may be −∞, vh +∞) by parallelograms
/// with two sides parallel to e_s. Containment is certified: below each piece
/// P < vl and above it P > vh inside the rectangle. Pieces not meeting `clip`
/// are dropped. Returns false if some piece was rejected at minimal length or
/// the budget ran out; pieces already accepted are left to the caller.
bool band_cover(const Poly2& p, const FrameRect& rect, const MonotoneBounds& mb, double vl, double vh,
                const Parallelogram& clip, const PieceAcceptor& accept, const BandCoverOptions& opts = {});

}  // namespace affdec
