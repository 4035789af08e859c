#include "affdec/decompose.hpp"

#include "affdec/errors.hpp"
#include "affdec/range.hpp"

#include <algorithm>
#include <cmath>

namespace affdec {

ValidationReport validate(const DecompositionResult& result, const Poly2& phi, int grid) {
    ValidationReport rep;
    const auto& dom = result.cfg.domain;
    const auto all = result.parallelograms();

    const auto counts = grid_counts(all, 1, grid, dom);
    std::size_t covered = 0;
    bool witness = false;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] > 0) {
            ++covered;
        } else if (!witness) {
            witness = true;
            const int gi = static_cast<int>(i % grid), gj = static_cast<int>(i / grid);
            rep.uncovered_witness = {dom[0] + (dom[1] - dom[0]) * gi / (grid - 1),
                                     dom[2] + (dom[3] - dom[2]) * gj / (grid - 1)};
        }
    }
    rep.coverage_fraction = counts.empty() ? 0.0 : static_cast<double>(covered) / counts.size();
    rep.coverage_ok = covered == counts.size();

    rep.min_width = all.empty() ? 0.0 : 1e300;
    for (std::size_t i = 0; i < all.size(); ++i) {
        const double w = width(all[i]);
        if (w < rep.min_width) {
            rep.min_width = w;
            rep.width_witness = static_cast<int>(i);
        }
    }
    rep.width_ok = !all.empty() && rep.min_width >= 0.5 / result.R * (1 - 1e-9);

    const Poly2 det = hessian_det(phi);
    rep.tiny_ok = true;
    for (const auto& [e, leaves] : result.families)
        for (const auto& leaf : leaves) {
            if (leaf.stop_reason == StopReason::TinyCurvature) {
                const double sup = det.is_zero() ? 0.0 : sup_abs(det, leaf.omega, 1e-3 * result.tiny_bound);
                if (sup > result.tiny_bound * (1 + 1e-9)) rep.tiny_ok = false;
                continue;
            }
            bool ok = false;
            try {
                ok = check_admissible(phi, leaf.omega, sigma_of(e), result.R, result.consts).cls !=
                     Admissibility::NotAdmissible;
            } catch (const Error&) {
            }
            if (!ok) ++rep.admissibility_failures;
        }
    rep.admissible_ok = rep.admissibility_failures == 0;

    // Depth and telescoping along each branch, measured from the node's root.
    const double c_alpha = 6 / result.cfg.alpha, logK = std::log(result.cfg.K);
    const double d = std::max(result.degree, 2);
    rep.depth_ok = true;
    rep.telescoping_ok = true;
    for (const TreeNode& node : result.tree) {
        double measured = 1, formal = 1;
        int root = node.id;
        for (int k = node.id; k >= 0; k = result.tree[k].parent) {
            const TreeNode& t = result.tree[k];
            root = k;
            if (t.branch == Branch::Iter) {
                measured *= t.containment;
                formal *= 1 + std::pow(result.tree[t.parent].H, result.cfg.alpha / d);
            }
        }
        rep.max_containment_product = std::max(rep.max_containment_product, measured);
        rep.max_formal_product = std::max(rep.max_formal_product, formal);
        // Normalized σ, capped at 1/2.
        const double sn = std::min(0.5, sigma_of(result.tree[root].sigma_exp) / result.det_scale);
        const double bound = c_alpha * std::log(1 / sn) / logK;
        rep.max_depth = std::max(rep.max_depth, node.depth);
        rep.depth_bound = std::max(rep.depth_bound, bound);
        if (node.depth > bound) rep.depth_ok = false;
    }
    if (rep.max_containment_product > 2 || rep.max_formal_product > 2) rep.telescoping_ok = false;

    for (const auto& [e, leaves] : result.families) {
        std::vector<Parallelogram> fam;
        for (const auto& l : leaves) fam.push_back(l.omega);
        const auto c50 = grid_counts(fam, 50, grid, dom);
        const int m = c50.empty() ? 0 : *std::max_element(c50.begin(), c50.end());
        rep.overlap50[e] = m;
        rep.overlap_scaled[e] = m * std::pow(sigma_of(e), result.eps);
    }
    return rep;
}

}  // namespace affdec
