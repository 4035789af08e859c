#pragma once

#include "affdec/geometry.hpp"
#include "affdec/poly.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace affdec {

enum class SizeCase { A, B, C };
std::string to_string(SizeCase c);
SizeCase size_case_from_string(const std::string& s);

struct CoverPiece {
    Parallelogram omega;
    SizeCase size_case = SizeCase::A;
    /// Certified range of |P| on 2Ω, in normalized units.
    double p_lo = 0, p_hi = 0;
};

struct SublevelOptions {
    /// C in |P| ∈ [σ/C, Cσ] for case (a) and |P| ≤ Cσ for case (c).
    double dyadic_slack = 8;
    /// Case (b) pieces get the smallest dyadic σ with sup|P| ≤ b_slack·σ.
    double b_slack = 4;
    /// Upper bound on sup/inf of |P| over 2Ω for case (a).
    double max_ratio = 64;
    /// Case 1 needs sup ∂_s P ≤ monotone_ratio · inf ∂_s P on the frame box.
    double monotone_ratio = 1.5;
    int max_depth = 48;
    /// Axis box [x0,x1]×[y0,y1] to cover.
    std::array<double, 4> domain{-1, 1, -1, 1};
};

struct SublevelStats {
    int boxes = 0;
    int case1_boxes = 0;
    int band_splits = 0;
};

struct SublevelCover {
    Poly2 source;
    double R = 1, eps = 0;
    /// Values of P are divided by `scale`, a power of two, before banding.
    double scale = 1;
    /// σ = 2^{-k} keyed by k.
    std::map<int, std::vector<CoverPiece>> families;
    /// Pieces no size case could be certified for; empty on success.
    std::vector<CoverPiece> unclassified;
    SublevelStats stats;

    static double sigma(int k);
    /// Smallest admissible exponent: 2^{-k_max} ≥ R^{-6}.
    int k_max() const;
    std::size_t size() const;
    std::vector<Parallelogram> parallelograms() const;
};

/// Dyadic cover of [-1,1]² by parallelograms on which |P| is comparable to σ
/// (case a), bounded by σ on width-R^{-1} pieces (case b), or below R^{-6} (case c).
SublevelCover sublevel_cover(const Poly2& P, double R, double eps, const SublevelOptions& opts = {});

/// Parallelograms covering {ξ ∈ Ω₀ : |P(ξ)| < δ}, each of width ∼ δ/κ with |P| ≲ δ on its double.
std::vector<Parallelogram> zero_nbhd_cover(const Poly2& P, const Parallelogram& omega0, double delta, double kappa);

/// Σ 1_{cΩ} on the uniform n×n grid of the domain box (boundary included), row-major.
std::vector<int> grid_counts(const std::vector<Parallelogram>& pieces, double c, int n = 200,
                             const std::array<double, 4>& domain = {-1, 1, -1, 1});

}  // namespace affdec
