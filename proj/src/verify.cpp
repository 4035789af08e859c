#include "affdec/verify.hpp"

#include "affdec/errors.hpp"
#include "affdec/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

namespace affdec {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void fnv(std::uint64_t& h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
}

void fnv(std::uint64_t& h, double x) { fnv(h, &x, sizeof x); }

int ball_points(const SynthesisGrid& g) {
    int count = 0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            for (int k = 0; k < g.n; ++k) {
                const Point3 x = g.point(i, j, k);
                if (std::hypot(x[0] - g.center[0], x[1] - g.center[1], x[2] - g.center[2]) <= g.R) ++count;
            }
    return count;
}

Complex random_phase(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 2 * std::numbers::pi);
    return std::polar(1.0, u(rng));
}

void summarize(const std::vector<double>& v, double& max, double& min, double& mean) {
    if (v.empty()) return;
    max = *std::max_element(v.begin(), v.end());
    min = *std::min_element(v.begin(), v.end());
    mean = pairwise_sum(v) / static_cast<double>(v.size());
}

}  // namespace

std::uint64_t hash_inputs(const FourierData& f, const std::vector<double>& params) {
    std::uint64_t h = 14695981039346656037ULL;
    for (const auto& node : f.nodes) {
        fnv(h, node.xi[0]);
        fnv(h, node.xi[1]);
        fnv(h, node.eta);
        fnv(h, node.amp.real());
        fnv(h, node.amp.imag());
        fnv(h, node.volume);
        fnv(h, node.cell);
    }
    for (double p : params) fnv(h, p);
    return h;
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

RatioReport restriction_ratio(const Poly2& phi, const FourierData& f, double R, const MeasureSpec& spec,
                              const SynthesisGrid& grid) {
    const auto t0 = Clock::now();
    RatioReport rep;
    rep.name = "restriction";
    rep.grid_n = grid.n;
    rep.inputs_hash = hash_inputs(f, {R, spec.exponent, grid.R, static_cast<double>(grid.n)});
    const double l2 = l2_norm_dM(f, phi, spec);
    const double l4 = lp_norm(synthesize(f, grid), 4, Weight::SharpBall);
    rep.extra["l4"] = l4;
    rep.extra["l2"] = l2;
    if (l2 == 0 || l4 == 0) {
        rep.zero_input = l2 == 0;
        rep.value = 0;
    } else {
        rep.value = std::isinf(l2) ? 0.0 : l4 / (l2 / std::sqrt(R));
    }
    rep.runtime = seconds_since(t0);
    return rep;
}

EnsembleReport restriction_ensemble(const Poly2& phi, double R, const MeasureSpec& spec, const EnsembleOptions& opt) {
    if (!(R >= 1)) throw InvalidArgument("R must be at least 1");
    if (opt.trials < 1) throw InvalidArgument("ensemble needs at least one trial");
    const auto t0 = Clock::now();
    const double step = 1 / (2 * R);
    const int kmax = static_cast<int>(std::floor(1 / step + 1e-9));
    const double volume = step * step * 2 / R;

    FourierData nodes;
    LatticeData lat;
    lat.step = {step, step, step};
    for (int a = -kmax; a <= kmax; ++a)
        for (int b = -kmax; b <= kmax; ++b) {
            const Point2 xi{a * step, b * step};
            const int c = static_cast<int>(std::lround(phi(xi) / step));
            lat.index.push_back({a, b, c});
            nodes.nodes.push_back({xi, c * step, {1, 0}, volume, step});
        }
    const double l2 = l2_norm_dM(nodes, phi, spec);

    EnsembleReport rep;
    rep.name = "restriction/" + spec.preset;
    rep.R = R;
    rep.nodes = nodes.nodes.size();
    rep.grid_n = std::max(8, std::min(static_cast<int>(std::lround(3 * R)), opt.grid_cap));
    rep.inputs_hash = hash_inputs(nodes, {R, spec.exponent, static_cast<double>(opt.seed),
                                          static_cast<double>(opt.trials), static_cast<double>(rep.grid_n)});
    const SynthesisGrid grid{{0, 0, 0}, R, rep.grid_n};
    rep.values.resize(opt.trials);
    lat.weight.resize(lat.index.size());
    for (int t = 0; t < opt.trials; ++t) {
        std::mt19937_64 rng(trial_seed(opt.seed, t));
        for (auto& w : lat.weight) w = volume * random_phase(rng);
        const double l4 = lp_norm(synthesize_lattice(lat, grid), 4, Weight::SharpBall);
        rep.values[t] = std::isfinite(l2) && l2 > 0 ? l4 / (l2 / std::sqrt(R)) : 0.0;
    }
    summarize(rep.values, rep.max, rep.min, rep.mean);
    rep.runtime = seconds_since(t0);
    return rep;
}

std::vector<int> assign_nodes(const FourierData& f, const std::vector<Parallelogram>& family) {
    std::vector<int> out(f.nodes.size(), -1);
    for (std::size_t q = 0; q < f.nodes.size(); ++q) {
        for (std::size_t i = 0; i < family.size(); ++i)
            if (contains(family[i], f.nodes[q].xi)) {
                out[q] = static_cast<int>(i);
                break;
            }
        if (out[q] < 0)
            throw UnassignedNode("node " + std::to_string(q) + " at (" + std::to_string(f.nodes[q].xi[0]) + ", " +
                                 std::to_string(f.nodes[q].xi[1]) + ") lies in no parallelogram");
    }
    return out;
}

RatioReport decoupling_ratio(const Poly2& phi, const std::vector<Parallelogram>& family, const FourierData& f,
                             double p, double R, double sigma, double eps, const SynthesisGrid& grid) {
    const auto t0 = Clock::now();
    for (std::size_t q = 0; q < f.nodes.size(); ++q)
        if (!(std::abs(f.nodes[q].eta - phi(f.nodes[q].xi)) < 1 / R))
            throw NodeOutsideSupport("node " + std::to_string(q) + " lies outside the 1/R neighbourhood");
    RatioReport rep;
    rep.name = "decoupling";
    rep.grid_n = grid.n;
    rep.inputs_hash = hash_inputs(f, {p, R, sigma, eps, grid.R, grid.extent, static_cast<double>(grid.n)});

    const std::vector<int> owner = assign_nodes(f, family);
    std::vector<FourierData> pieces(family.size());
    for (std::size_t q = 0; q < owner.size(); ++q) pieces[owner[q]].nodes.push_back(f.nodes[q]);

    const std::vector<double> wb = sample_weights(grid, Weight::WB);
    Field total{grid, std::vector<Complex>(grid.size())};
    std::vector<double> squares;
    for (const auto& piece : pieces) {
        if (piece.nodes.empty()) continue;
        const Field F = synthesize(piece, grid);
        const double norm = lp_norm(F, p, wb);
        squares.push_back(norm * norm);
        for (std::size_t i = 0; i < F.values.size(); ++i) total.values[i] += F.values[i];
    }
    const double lhs = lp_norm(total, p, wb);
    const double rhs = std::sqrt(pairwise_sum(squares));
    const double n = static_cast<double>(squares.size());
    rep.extra["lhs"] = lhs;
    rep.extra["rhs"] = rhs;
    rep.extra["pieces"] = n;
    if (rhs == 0) {
        rep.zero_input = true;
        rep.extra["scaled"] = 0;
        rep.extra["cs_floor"] = 1;
        rep.extra["cs_ceiling"] = 1;
    } else {
        rep.value = lhs / rhs;
        rep.extra["scaled"] = lhs / (std::pow(sigma, -eps) * rhs);
        rep.extra["cs_floor"] = rep.value >= (1 - 1e-9) / std::sqrt(n) ? 1 : 0;
        rep.extra["cs_ceiling"] = rep.value <= (1 + 1e-9) * std::sqrt(n) ? 1 : 0;
    }
    rep.runtime = seconds_since(t0);
    return rep;
}

DecouplingEnsemble decoupling_ensemble(const DecompositionResult& result, const Poly2& phi,
                                       const DecouplingOptions& opt) {
    if (opt.trials < 1 || opt.nodes_per_side < 1) throw InvalidArgument("ensemble needs trials and nodes");
    const auto t0 = Clock::now();
    DecouplingEnsemble out;
    out.R = result.R;
    out.eps = result.eps;
    out.p = opt.p;
    out.grid_n = opt.grid_n > 0 ? opt.grid_n
                                : std::clamp(static_cast<int>(std::ceil(2 * opt.extent * result.R / 0.4)), 24,
                                             std::max(24, opt.grid_cap));
    const SynthesisGrid grid{{0, 0, 0}, result.R, out.grid_n, opt.extent};
    const int k = opt.nodes_per_side;
    for (const auto& [e, leaves] : result.families) {
        FamilyDecoupling fam;
        fam.sigma_exp = e;
        fam.sigma = std::exp2(-e);
        fam.pieces = leaves.size();
        std::vector<Parallelogram> family;
        FourierData f;
        for (const auto& leaf : leaves) {
            family.push_back(leaf.omega);
            const double volume = leaf.omega.area() / (k * k) * 2 / result.R;
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b) {
                    const Point2 xi = leaf.omega.map({-1 + (2 * a + 1.0) / k, -1 + (2 * b + 1.0) / k});
                    f.nodes.push_back({xi, phi(xi), {1, 0}, volume});
                }
        }
        fam.nodes = f.nodes.size();
        fam.inputs_hash = hash_inputs(f, {opt.p, static_cast<double>(opt.seed), static_cast<double>(opt.trials)});
        for (int t = 0; t < opt.trials; ++t) {
            std::mt19937_64 rng(trial_seed(opt.seed ^ static_cast<std::uint64_t>(e + 1024), t));
            for (auto& node : f.nodes) node.amp = random_phase(rng);
            const RatioReport r = decoupling_ratio(phi, family, f, opt.p, result.R, fam.sigma, result.eps, grid);
            fam.ratios.push_back(r.value);
            fam.scaled.push_back(r.extra.at("scaled"));
            fam.cs_ok = fam.cs_ok && r.extra.at("cs_floor") == 1 && r.extra.at("cs_ceiling") == 1;
        }
        fam.max_ratio = *std::max_element(fam.ratios.begin(), fam.ratios.end());
        fam.max_scaled = *std::max_element(fam.scaled.begin(), fam.scaled.end());
        out.families.push_back(std::move(fam));
    }
    out.runtime = seconds_since(t0);
    return out;
}

std::size_t DyadicSplit::size() const {
    std::size_t n = zero.nodes.size();
    for (const auto& [e, band] : bands) n += band.nodes.size();
    return n;
}

DyadicSplit dyadic_split(const FourierData& f, const Poly2& phi, double R) {
    const Poly2 det = hessian_det(phi);
    const double floor_level = std::pow(R, -6.0);
    DyadicSplit out;
    for (const auto& node : f.nodes) {
        const double d = std::abs(det(node.xi));
        if (d == 0 || d <= floor_level) {
            out.zero.nodes.push_back(node);
            continue;
        }
        int x;
        const double m = std::frexp(d, &x);
        const int up = m == 0.5 ? x - 1 : x;  // σ = 2^{up} is the dyadic ceiling of d
        out.bands[std::max(0, -up)].nodes.push_back(node);
    }
    return out;
}

RatioReport tiny_curvature_check(const FourierData& f0, const Poly2& phi, double R, double eps, double bound,
                                 const SynthesisGrid& grid) {
    const auto t0 = Clock::now();
    RatioReport rep;
    rep.name = "tiny_curvature";
    rep.grid_n = grid.n;
    rep.inputs_hash = hash_inputs(f0, {R, eps, bound, static_cast<double>(grid.n)});
    const Poly2 det = hessian_det(phi);
    for (std::size_t q = 0; q < f0.nodes.size(); ++q)
        if (std::abs(det(f0.nodes[q].xi)) > bound * (1 + 1e-12))
            throw PreconditionFails("node " + std::to_string(q) + " exceeds the tiny-curvature bound");
    if (f0.nodes.empty()) {
        rep.zero_input = true;
        rep.extra["vacuous"] = 1;
        rep.extra["ratio1_R34"] = 0;
        rep.extra["ratio2"] = 0;
        rep.runtime = seconds_since(t0);
        return rep;
    }
    double l1 = 0, l2sq = 0;
    for (const auto& node : f0.nodes) {
        l1 += std::abs(node.amp) * node.volume;
        l2sq += std::norm(node.amp) * node.volume;
    }
    const double l4 = lp_norm(synthesize(f0, grid), 4, Weight::SharpBall);
    const double ball = ball_points(grid) * std::pow(grid.spacing(), 3);
    rep.extra["vacuous"] = 0;
    rep.value = l1 > 0 ? l4 / (std::pow(ball, 0.25) * l1) : 0;
    rep.extra["ratio1_R34"] = l1 > 0 ? l4 / (std::pow(R, 0.75) * l1) : 0;
    const double lm = l2_norm_dM(f0, phi, MeasureSpec::M_damped(eps));
    rep.extra["ratio2"] = std::isfinite(lm) && lm > 0 ? std::sqrt(l2sq) * std::pow(bound, -(0.25 + eps) / 2) / lm : 0;
    rep.runtime = seconds_since(t0);
    return rep;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope fit needs two or more matching points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace affdec
