#pragma once

#include "affdec/poly.hpp"

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace affdec {

using Complex = std::complex<double>;
using Point3 = std::array<double, 3>;

/// A point mass of F̂ at (ξ, η) with amplitude a over a cell of volume v; F = Σ a·v·e^{2πi x·(ξ,η)}.
struct FourierNode {
    Point2 xi{0, 0};
    double eta = 0;
    Complex amp{0, 0};
    double volume = 1;
    /// Side of the ξ-cell; used to integrate densities that blow up at the node.
    double cell = 0;
};

struct FourierData {
    std::vector<FourierNode> nodes;
};

/// Cell-centred cube grid of half-side extent·R around `center`, n points per axis.
struct SynthesisGrid {
    Point3 center{0, 0, 0};
    double R = 1;
    int n = 16;
    double extent = 1;

    double spacing() const { return 2 * extent * R / n; }
    Point3 point(int i, int j, int k) const;
    std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }
};

/// Samples on a SynthesisGrid, index (i·n + j)·n + k.
struct Field {
    SynthesisGrid grid;
    std::vector<Complex> values;
};

/// Direct summation; throws BudgetExceeded when nodes × points exceeds `budget`.
Field synthesize(const FourierData& f, const SynthesisGrid& grid, double budget = 4e10);
std::vector<Complex> synthesize_at(const FourierData& f, const std::vector<Point3>& points, double budget = 4e10);

/// Frequencies ξ = origin + k·step on an integer lattice; weights are a·v.
struct LatticeData {
    Point3 origin{0, 0, 0};
    Point3 step{1, 1, 1};
    std::vector<std::array<int, 3>> index;
    std::vector<Complex> weight;
};

/// 3D FFT path; needs step_d · spacing · n = 1 on every axis.
Field synthesize_lattice(const LatticeData& f, const SynthesisGrid& grid);
FourierData to_nodes(const LatticeData& f);

enum class Weight { SharpBall, WB };
/// w_B(x) = (1 + |x − c|/R)^{-100}.
double wb_weight(const SynthesisGrid& grid, const Point3& x);
/// Riemann sum of |F|^p·weight, p-th root; p = ∞ gives the weighted max.
double lp_norm(const Field& F, double p, Weight weight);
/// Per-sample weights indexed like Field::values, for repeated norms on one grid.
std::vector<double> sample_weights(const SynthesisGrid& grid, Weight weight);
double lp_norm(const Field& F, double p, const std::vector<double>& weights);

}  // namespace affdec
