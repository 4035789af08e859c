#include "affdec/fourier.hpp"

#include "affdec/errors.hpp"
#include "affdec/parallel.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace affdec {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

Complex mul(Complex a, Complex b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

Complex phase(double t) { return std::polar(1.0, kTwoPi * t); }

double axis(const SynthesisGrid& g, int d, int i) {
    const double h = g.spacing();
    return g.center[d] - g.extent * g.R + (i + 0.5) * h;
}

void check_grid(const SynthesisGrid& g) {
    if (g.n < 8) throw InvalidArgument("synthesis grid needs at least 8 points per axis");
    if (!(g.R > 0) || !(g.extent > 0)) throw InvalidArgument("synthesis grid radius must be positive");
}

}  // namespace

Point3 SynthesisGrid::point(int i, int j, int k) const { return {axis(*this, 0, i), axis(*this, 1, j), axis(*this, 2, k)}; }

Field synthesize(const FourierData& f, const SynthesisGrid& grid, double budget) {
    check_grid(grid);
    const std::size_t m = f.nodes.size();
    const int n = grid.n;
    if (static_cast<double>(m) * static_cast<double>(grid.size()) > budget)
        throw BudgetExceeded("direct synthesis exceeds the node-by-point budget");
    Field out{grid, std::vector<Complex>(grid.size())};
    if (m == 0) return out;

    // e^{2πi x·ξ} factors per axis.
    std::vector<Complex> e1(m * n), e2(m * n), e3(m * n), w(m);
    for (std::size_t q = 0; q < m; ++q) {
        const auto& node = f.nodes[q];
        w[q] = node.amp * node.volume;
        for (int i = 0; i < n; ++i) {
            e1[q * n + i] = phase(axis(grid, 0, i) * node.xi[0]);
            e2[q * n + i] = phase(axis(grid, 1, i) * node.xi[1]);
            e3[q * n + i] = phase(axis(grid, 2, i) * node.eta);
        }
    }
    parallel_for(static_cast<std::size_t>(n) * n, [&](std::size_t ij) {
        const std::size_t i = ij / n, j = ij % n;
        Complex* row = &out.values[ij * n];
        double* r = reinterpret_cast<double*>(row);
        for (std::size_t q = 0; q < m; ++q) {
            const Complex c = mul(mul(w[q], e1[q * n + i]), e2[q * n + j]);
            const double cr = c.real(), ci = c.imag();
            const double* e = reinterpret_cast<const double*>(&e3[q * n]);
            for (int k = 0; k < n; ++k) {
                const double er = e[2 * k], ei = e[2 * k + 1];
                r[2 * k] += cr * er - ci * ei;
                r[2 * k + 1] += cr * ei + ci * er;
            }
        }
    });
    return out;
}

std::vector<Complex> synthesize_at(const FourierData& f, const std::vector<Point3>& points, double budget) {
    if (static_cast<double>(f.nodes.size()) * static_cast<double>(points.size()) > budget)
        throw BudgetExceeded("direct synthesis exceeds the node-by-point budget");
    std::vector<Complex> out(points.size());
    parallel_for(points.size(), [&](std::size_t p) {
        const Point3& x = points[p];
        Complex acc = 0;
        for (const auto& node : f.nodes)
            acc += node.amp * node.volume * phase(x[0] * node.xi[0] + x[1] * node.xi[1] + x[2] * node.eta);
        out[p] = acc;
    });
    return out;
}

Field synthesize_lattice(const LatticeData& f, const SynthesisGrid& grid) {
    check_grid(grid);
    if (f.index.size() != f.weight.size()) throw InvalidArgument("lattice index and weight sizes differ");
    const int n = grid.n;
    const double h = grid.spacing();
    for (int d = 0; d < 3; ++d)
        if (std::abs(f.step[d] * h * n - 1) > 1e-9)
            throw InvalidArgument("lattice step must equal 1/(n·spacing) on every axis");
    const Point3 x0{axis(grid, 0, 0), axis(grid, 1, 0), axis(grid, 2, 0)};

    const std::size_t total = grid.size();
    fftw_complex* buf = fftw_alloc_complex(total);
    std::fill_n(reinterpret_cast<double*>(buf), 2 * total, 0.0);
    for (std::size_t q = 0; q < f.index.size(); ++q) {
        const auto& k = f.index[q];
        const Complex b =
            f.weight[q] * phase(x0[0] * k[0] * f.step[0] + x0[1] * k[1] * f.step[1] + x0[2] * k[2] * f.step[2]);
        auto wrap = [n](int v) { return static_cast<std::size_t>(((v % n) + n) % n); };
        const std::size_t at = (wrap(k[0]) * n + wrap(k[1])) * n + wrap(k[2]);
        buf[at][0] += b.real();
        buf[at][1] += b.imag();
    }
    fftw_plan plan = fftw_plan_dft_3d(n, n, n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    Field out{grid, std::vector<Complex>(total)};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const Point3 x = grid.point(i, j, k);
                const std::size_t at = (static_cast<std::size_t>(i) * n + j) * n + k;
                out.values[at] = Complex(buf[at][0], buf[at][1]) *
                                 phase(x[0] * f.origin[0] + x[1] * f.origin[1] + x[2] * f.origin[2]);
            }
    fftw_free(buf);
    return out;
}

FourierData to_nodes(const LatticeData& f) {
    FourierData out;
    for (std::size_t q = 0; q < f.index.size(); ++q) {
        const auto& k = f.index[q];
        FourierNode node;
        node.xi = {f.origin[0] + k[0] * f.step[0], f.origin[1] + k[1] * f.step[1]};
        node.eta = f.origin[2] + k[2] * f.step[2];
        node.amp = f.weight[q];
        node.volume = 1;
        out.nodes.push_back(node);
    }
    return out;
}

double wb_weight(const SynthesisGrid& grid, const Point3& x) {
    const double r = std::hypot(x[0] - grid.center[0], x[1] - grid.center[1], x[2] - grid.center[2]);
    return std::pow(1 + r / grid.R, -100.0);
}

std::vector<double> sample_weights(const SynthesisGrid& g, Weight weight) {
    const int n = g.n;
    std::vector<double> w(g.size());
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const Point3 x = g.point(static_cast<int>(i), j, k);
                const std::size_t at = (i * n + j) * n + k;
                if (weight == Weight::WB) {
                    w[at] = wb_weight(g, x);
                } else {
                    const double r = std::hypot(x[0] - g.center[0], x[1] - g.center[1], x[2] - g.center[2]);
                    w[at] = r <= g.R ? 1.0 : 0.0;
                }
            }
    });
    return w;
}

double lp_norm(const Field& F, double p, const std::vector<double>& weights) {
    if (!(p >= 1)) throw InvalidArgument("p must be at least 1");
    if (weights.size() != F.values.size()) throw InvalidArgument("weight count differs from the field size");
    const std::size_t n = static_cast<std::size_t>(F.grid.n);
    const bool inf = std::isinf(p);
    std::vector<double> slab(n, 0.0);
    parallel_for(n, [&](std::size_t i) {
        double acc = 0;
        for (std::size_t at = i * n * n; at < (i + 1) * n * n; ++at) {
            if (weights[at] == 0) continue;
            if (inf) {
                acc = std::max(acc, std::abs(F.values[at]) * weights[at]);
            } else {
                const double a2 = std::norm(F.values[at]);
                acc += (p == 2 ? a2 : p == 4 ? a2 * a2 : std::pow(a2, p / 2)) * weights[at];
            }
        }
        slab[i] = acc;
    });
    if (inf) return *std::max_element(slab.begin(), slab.end());
    return std::pow(pairwise_sum(slab) * std::pow(F.grid.spacing(), 3), 1 / p);
}

double lp_norm(const Field& F, double p, Weight weight) {
    if (!(p >= 1)) throw InvalidArgument("p must be at least 1");
    return lp_norm(F, p, sample_weights(F.grid, weight));
}

}  // namespace affdec
