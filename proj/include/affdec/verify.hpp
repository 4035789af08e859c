#pragma once

#include "affdec/decompose.hpp"
#include "affdec/fourier.hpp"
#include "affdec/measures.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace affdec {

/// A named empirical ratio. `runtime` is wall time in seconds and is left out of serialized
/// artifacts unless timings are requested.
struct RatioReport {
    std::string name;
    double value = 0;
    std::uint64_t inputs_hash = 0;
    int grid_n = 0;
    double runtime = 0;
    bool zero_input = false;
    std::map<std::string, double> extra;
};

/// FNV-1a over the node data and the given parameters.
std::uint64_t hash_inputs(const FourierData& f, const std::vector<double>& params = {});

/// Generator for trial `trial` of an ensemble; independent of evaluation order.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

/// ‖F‖_{L⁴(B_R)} / (R^{-1/2}‖F̂‖_{L²(spec)}); zero input gives 0 with `zero_input` set.
RatioReport restriction_ratio(const Poly2& phi, const FourierData& f, double R, const MeasureSpec& spec,
                              const SynthesisGrid& grid);

struct EnsembleOptions {
    int trials = 50;
    std::uint64_t seed = 7;
    /// Points per axis is min(3R, grid_cap).
    int grid_cap = 96;
};

struct EnsembleReport {
    std::string name;
    double R = 0;
    std::size_t nodes = 0;
    int grid_n = 0;
    std::uint64_t inputs_hash = 0;
    std::vector<double> values;
    double max = 0, min = 0, mean = 0;
    double runtime = 0;
};

/// Unit-amplitude random phases on every frequency lattice point (ξ-step 1/(2R)) over [-1,1]²,
/// η rounded to the lattice; F is synthesized by FFT on the R-ball grid.
EnsembleReport restriction_ensemble(const Poly2& phi, double R, const MeasureSpec& spec, const EnsembleOptions& opt);

/// Piece index of every node: the lowest-index Ω containing ξ. Throws UnassignedNode otherwise.
std::vector<int> assign_nodes(const FourierData& f, const std::vector<Parallelogram>& family);

/// LHS = ‖F‖_{L^p(w_B)}, RHS = (Σ_Ω ‖F_Ω‖²_{L^p(w_B)})^{1/2}. value = LHS/RHS,
/// extra["scaled"] = LHS/(σ^{-ε}RHS), extra["pieces"] = occupied pieces,
/// extra["cs_floor"], extra["cs_ceiling"] = 1 when N^{-1/2} ≤ value ≤ N^{1/2}.
RatioReport decoupling_ratio(const Poly2& phi, const std::vector<Parallelogram>& family, const FourierData& f,
                             double p, double R, double sigma, double eps, const SynthesisGrid& grid);

struct DecouplingOptions {
    double p = 4;
    int trials = 50;
    std::uint64_t seed = 7;
    /// Points per axis; 0 picks the smallest n ≥ 24 with spacing ≤ 0.4, capped at grid_cap.
    int grid_n = 0;
    int grid_cap = 64;
    /// Grid half-side in units of R; w_B is below 1e-3 outside 0.08R.
    double extent = 0.08;
    int nodes_per_side = 3;
};

struct FamilyDecoupling {
    int sigma_exp = 0;
    double sigma = 1;
    std::size_t pieces = 0, nodes = 0;
    std::uint64_t inputs_hash = 0;
    std::vector<double> ratios, scaled;
    double max_ratio = 0, max_scaled = 0;
    /// Cauchy–Schwarz floor and ceiling held on every trial.
    bool cs_ok = true;
};

struct DecouplingEnsemble {
    double R = 0, eps = 0, p = 4;
    int grid_n = 0;
    std::vector<FamilyDecoupling> families;
    double runtime = 0;
};

/// Random-phase ensembles per σ-family: nodes_per_side² nodes in each Ω on φ, assigned by
/// assign_nodes, with volume |Ω|·2R^{-1}/nodes.
DecouplingEnsemble decoupling_ensemble(const DecompositionResult& result, const Poly2& phi,
                                       const DecouplingOptions& opt);

struct DyadicSplit {
    FourierData zero;
    /// σ = 2^{-e} ↦ nodes with σ/2 < |det D²φ(ξ)| ≤ σ, σ capped at 1.
    std::map<int, FourierData> bands;
    std::size_t size() const;
};

/// Routes nodes by |det D²φ(ξ)|: det = 0 or |det| ≤ R^{-6} goes to F̂₀.
DyadicSplit dyadic_split(const FourierData& f, const Poly2& phi, double R);

/// Two-step tiny-curvature chain for F̂₀ with |det D²φ| ≤ bound on every node:
/// value = ratio₁ = ‖F‖_{L⁴(B_R)}/(|B_R ∩ grid|^{1/4}‖F̂‖_{L¹}) ≤ 1 (Hölder),
/// extra["ratio1_R34"] = the same with R^{3/4} in place of |B_R ∩ grid|^{1/4},
/// extra["ratio2"] = ‖F̂‖_{L²(dξdη)} bound^{-(1/4+ε)/2} / ‖F̂‖_{L²(dM_ε)} ≤ 1,
/// extra["vacuous"] = 1 when F̂₀ is empty. Throws PreconditionFails when a node exceeds the bound.
RatioReport tiny_curvature_check(const FourierData& f0, const Poly2& phi, double R, double eps, double bound,
                                 const SynthesisGrid& grid);

/// Least-squares slope of log y against log x.
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace affdec
