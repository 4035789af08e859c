#pragma once

#include "affdec/geometry.hpp"
#include "affdec/hessian_split.hpp"
#include "affdec/poly.hpp"
#include "affdec/sublevel.hpp"

#include <map>
#include <string>
#include <vector>

namespace affdec {

enum class StopReason { HReached, WidthStop, FlatCaseB, TinyCurvature };
std::string to_string(StopReason r);
StopReason stop_reason_from_string(const std::string& s);

/// Family keys are exponents e with σ = 2^{-e}.
double sigma_of(int e);

struct DecompositionLeaf {
    Parallelogram omega;
    int sigma_exp = 0;
    Admissibility verdict = Admissibility::NotAdmissible;
    AdmissibilityWitnesses w;
    StopReason stop_reason = StopReason::HReached;
    int node = -1;  // tree node that produced the leaf, −1 when it came straight from the cover
};

enum class Branch { Root, Iter, Stop, Refine };
std::string to_string(Branch b);
Branch branch_from_string(const std::string& s);

struct TreeNode {
    int id = 0, parent = -1;
    Branch branch = Branch::Root;
    int depth = 0;  // induction steps from the root
    Parallelogram omega;
    int sigma_exp = 0;
    double H = 0;            // certified H(Ω); 0 when not computed
    double containment = 1;  // least c with Ω ⊆ c·parent
};

struct DecomposeConfig {
    double K = 1024;
    double alpha = 0.25;
    /// Overrides AdmissibilityConstants::defaults(ε) when set.
    bool custom_constants = false;
    AdmissibilityConstants consts;
    /// Cap on sup/inf of |det D²φ| over the double of a case (a) root.
    double band_ratio = 8;
    int max_steps = 64;
    /// Extra bisection rounds allowed when a candidate leaf is not admissible.
    int max_refine = 6;
    /// Axis box to decompose; [-1,1]² by default.
    std::array<double, 4> domain{-1, 1, -1, 1};
};

struct DecompositionResult {
    double R = 1, eps = 0.25;
    DecomposeConfig cfg;
    AdmissibilityConstants consts;
    int degree = 0;
    /// Case (c) leaves satisfy sup_Ω |det D²φ| ≤ tiny_bound.
    double tiny_bound = 0;
    int tiny_exp = 0;
    /// Power of two dividing det D²φ in the sublevel cover; σ/det_scale is the normalized level.
    double det_scale = 1;
    std::map<int, std::vector<DecompositionLeaf>> families;
    std::vector<TreeNode> tree;

    std::size_t leaf_count() const;
    std::vector<Parallelogram> parallelograms() const;
};

struct InductionOutput {
    std::vector<Parallelogram> iter, stop;
    double H = 0, delta = 0;
    SplitResult split;
};

/// One step of the induction on H(Ω): split φ̄_{T_Ω} = A∘ρ + O(H^α), cut the rotated
/// preimage into δ-flat strips and then δh-flat strips, merging to width R^{-1}.
/// Returns iter = {Ω} when H(Ω) ≥ 1/K.
InductionOutput induction_step(const Poly2& phi, const Parallelogram& omega, double sigma, double R, double alpha,
                               double K);

/// Cuts Ω along its long edge into R^{-1}-flat pieces.
std::vector<Parallelogram> flat_strip_partition(const Poly2& phi, const Parallelogram& omega, double R);

/// Least c ≥ 0 with inner ⊆ c·outer (dilation about the centre of outer).
double containment_factor(const Parallelogram& inner, const Parallelogram& outer);

DecompositionResult decompose(const Poly2& phi, double R, double eps, const DecomposeConfig& cfg = {});

struct TileResult {
    Parallelogram tile;
    Poly2 taylor;
    double remainder_bound = 0;  // ‖φ‖_{C^{d+1}} σ^{ε(d-1)}
    DecompositionResult result;
};

/// Tiles [-1,1]² by squares of side ≈ σ^ε, decomposes the degree-d Taylor polynomial on
/// each tile and keeps families with σ' ≥ σ/2.
std::vector<TileResult> decompose_smooth(const DerivativeOracle& oracle, double R, double eps, double sigma, int d,
                                         double cd1_norm, const DecomposeConfig& cfg = {});

struct ValidationReport {
    bool coverage_ok = false;
    double coverage_fraction = 0;
    Point2 uncovered_witness{0, 0};
    bool width_ok = false;
    double min_width = 0;
    int width_witness = -1;  // index into parallelograms()
    bool admissible_ok = false;
    int admissibility_failures = 0;
    bool tiny_ok = false;
    bool depth_ok = false;
    int max_depth = 0;
    double depth_bound = 0;
    bool telescoping_ok = false;
    double max_containment_product = 1;
    double max_formal_product = 1;  // Π (1 + H_k^{α/d}) along a branch
    /// Per family: max 50-dilate overlap and overlap·σ^ε.
    std::map<int, int> overlap50;
    std::map<int, double> overlap_scaled;
    bool ok() const { return coverage_ok && width_ok && admissible_ok && tiny_ok && depth_ok && telescoping_ok; }
};

/// Re-checks the decomposition from scratch against φ.
ValidationReport validate(const DecompositionResult& result, const Poly2& phi, int grid = 200);

}  // namespace affdec
