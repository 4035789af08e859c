#include "affdec/poly.hpp"

#include "affdec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace affdec {

Mat2 Mat2::inverse() const {
    const double dt = det();
    if (dt == 0.0) throw DegenerateParallelogram("singular 2x2 matrix");
    return {d / dt, -b / dt, -c / dt, a / dt};
}

Mat2 Mat2::rotation(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c, -s, s, c};
}

AffineMap2 AffineMap2::inverse() const {
    const Mat2 li = linear.inverse();
    const Point2 t = li.apply(shift);
    return {li, {-t[0], -t[1]}};
}

AffineMap2 AffineMap2::compose(const AffineMap2& inner) const {
    const Point2 t = (*this)(inner.shift);
    return {linear * inner.linear, t};
}

// ---------------------------------------------------------------- Poly1

Poly1::Poly1(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void Poly1::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Poly1::operator()(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Poly1 Poly1::derivative() const {
    std::vector<double> out;
    for (std::size_t i = 1; i < coeffs_.size(); ++i) out.push_back(coeffs_[i] * static_cast<double>(i));
    return Poly1(std::move(out));
}

double Poly1::norm() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

Poly1 Poly1::compose_affine(double s, double t) const {
    // Horner in polynomial arithmetic: acc = acc*(s x + t) + c_i.
    std::vector<double> acc;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        std::vector<double> next(acc.size() + 1, 0.0);
        for (std::size_t i = 0; i < acc.size(); ++i) {
            next[i] += acc[i] * t;
            next[i + 1] += acc[i] * s;
        }
        next[0] += *it;
        acc = std::move(next);
    }
    return Poly1(std::move(acc));
}

Poly1 Poly1::operator*(double s) const {
    std::vector<double> out(coeffs_);
    for (double& c : out) c *= s;
    return Poly1(std::move(out));
}

Poly1 Poly1::operator+(const Poly1& o) const {
    std::vector<double> out(std::max(coeffs_.size(), o.coeffs_.size()), 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] += coeffs_[i];
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) out[i] += o.coeffs_[i];
    return Poly1(std::move(out));
}

Poly1 Poly1::operator-(const Poly1& o) const { return *this + o * -1.0; }

// ---------------------------------------------------------------- Poly2

Poly2::Poly2(int max_degree, std::initializer_list<std::pair<const Exponent, double>> terms)
    : degree_(max_degree) {
    for (const auto& [e, c] : terms) add(e.first, e.second, c);
}

Poly2 Poly2::constant(double c, int max_degree) {
    Poly2 p(max_degree);
    p.set(0, 0, c);
    return p;
}

Poly2 Poly2::monomial(int a1, int a2, double c) {
    Poly2 p(a1 + a2);
    p.set(a1, a2, c);
    return p;
}

Poly2 Poly2::from_poly1(const Poly1& q, int variable) {
    Poly2 p(std::max(q.degree(), 0));
    for (int i = 0; i <= q.degree(); ++i) {
        if (variable == 0)
            p.set(i, 0, q.coeff(i));
        else
            p.set(0, i, q.coeff(i));
    }
    return p;
}

int Poly2::true_degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, e.first + e.second);
    return d;
}

double Poly2::coeff(int a1, int a2) const {
    auto it = terms_.find({a1, a2});
    return it == terms_.end() ? 0.0 : it->second;
}

void Poly2::set(int a1, int a2, double c) {
    if (a1 < 0 || a2 < 0) throw InvalidArgument("negative exponent");
    if (!std::isfinite(c)) throw InvalidArgument("non-finite coefficient");
    if (a1 + a2 > degree_) degree_ = a1 + a2;
    if (c == 0.0)
        terms_.erase({a1, a2});
    else
        terms_[{a1, a2}] = c;
}

void Poly2::add(int a1, int a2, double c) { set(a1, a2, coeff(a1, a2) + c); }

double Poly2::eval(const Point2& xi) const {
    if (terms_.empty()) return 0.0;
    // Powers are cached per call; degrees are small.
    const int d = std::max(degree_, 0);
    double p1[64], p2[64];
    const int n = std::min(d, 63);
    p1[0] = p2[0] = 1.0;
    for (int i = 1; i <= n; ++i) {
        p1[i] = p1[i - 1] * xi[0];
        p2[i] = p2[i - 1] * xi[1];
    }
    double acc = 0.0;
    for (const auto& [e, c] : terms_) acc += c * p1[e.first] * p2[e.second];
    return acc;
}

Poly2 Poly2::operator+(const Poly2& o) const {
    Poly2 r = *this;
    r.degree_ = std::max(degree_, o.degree_);
    for (const auto& [e, c] : o.terms_) r.add(e.first, e.second, c);
    return r;
}

Poly2 Poly2::operator-(const Poly2& o) const { return *this + o * -1.0; }

Poly2 Poly2::operator*(const Poly2& o) const {
    Poly2 r(degree_ + o.degree_);
    std::map<Exponent, double> acc;
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : o.terms_) acc[{e1.first + e2.first, e1.second + e2.second}] += c1 * c2;
    for (const auto& [e, c] : acc) r.set(e.first, e.second, c);
    return r;
}

Poly2 Poly2::operator*(double s) const {
    Poly2 r(degree_);
    for (const auto& [e, c] : terms_) r.set(e.first, e.second, c * s);
    return r;
}

Poly2 Poly2::with_degree(int d) const {
    if (true_degree() > d) throw InvalidArgument("with_degree would truncate terms");
    Poly2 r = *this;
    r.degree_ = d;
    return r;
}

Poly2 Poly2::pruned(double tol) const {
    Poly2 r(degree_);
    for (const auto& [e, c] : terms_)
        if (std::abs(c) > tol) r.set(e.first, e.second, c);
    return r;
}

// ---------------------------------------------------------------- free functions

double coeff_norm(const Poly2& p) {
    double m = 0.0;
    for (const auto& [e, c] : p.terms()) m = std::max(m, std::abs(c));
    return m;
}

namespace {
double falling(int n, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= static_cast<double>(n - i);
    return r;
}
}  // namespace

Poly2 derivative(const Poly2& p, int a1, int a2) {
    if (a1 < 0 || a2 < 0) throw InvalidArgument("negative multi-index");
    Poly2 r(std::max(p.max_degree() - a1 - a2, 0));
    for (const auto& [e, c] : p.terms()) {
        if (e.first < a1 || e.second < a2) continue;
        r.set(e.first - a1, e.second - a2, c * falling(e.first, a1) * falling(e.second, a2));
    }
    return r;
}

Poly2 hessian_det(const Poly2& p) {
    const Poly2 pxx = derivative(p, 2, 0), pyy = derivative(p, 0, 2), pxy = derivative(p, 1, 1);
    Poly2 r = pxx * pyy - pxy * pxy;
    return Poly2(std::max(2 * (p.max_degree() - 2), 0)) + r;
}

Poly2 compose_affine(const Poly2& p, const AffineMap2& t) {
    const int d = std::max(p.max_degree(), 0);
    // x = a ξ₁ + b ξ₂ + e,  y = c ξ₁ + d ξ₂ + f
    Poly2 x(1), y(1);
    x.set(1, 0, t.linear.a);
    x.set(0, 1, t.linear.b);
    x.set(0, 0, t.shift[0]);
    y.set(1, 0, t.linear.c);
    y.set(0, 1, t.linear.d);
    y.set(0, 0, t.shift[1]);
    std::vector<Poly2> xp(d + 1), yp(d + 1);
    xp[0] = yp[0] = Poly2::constant(1.0);
    for (int i = 1; i <= d; ++i) {
        xp[i] = xp[i - 1] * x;
        yp[i] = yp[i - 1] * y;
    }
    std::map<Exponent, double> acc;
    for (const auto& [e, c] : p.terms()) {
        const Poly2 m = xp[e.first] * yp[e.second];
        for (const auto& [em, cm] : m.terms()) acc[em] += c * cm;
    }
    Poly2 r(d);
    for (const auto& [e, c] : acc) r.set(e.first, e.second, c);
    return r;
}

Poly2 recentred(const Poly2& phi, const AffineMap2& t) {
    Poly2 r = compose_affine(phi, t);
    r.set(0, 0, 0.0);
    r.set(1, 0, 0.0);
    r.set(0, 1, 0.0);
    return r;
}

Normalized normalize(const Poly2& psi) {
    const double n = coeff_norm(psi);
    if (n == 0.0) throw ZeroPolynomial("cannot normalize the zero polynomial");
    return {psi * (1.0 / n), n};
}

Poly1 restrict_to_line(const Poly2& p, const Point2& base, const Point2& dir) {
    // Substitute ξ = base + s·dir and collect powers of s.
    const int d = std::max(p.max_degree(), 0);
    std::vector<Poly1> xp(d + 1), yp(d + 1);
    const Poly1 x({base[0], dir[0]}), y({base[1], dir[1]});
    xp[0] = yp[0] = Poly1({1.0});
    auto mul = [](const Poly1& a, const Poly1& b) {
        if (a.is_zero() || b.is_zero()) return Poly1();
        std::vector<double> out(a.coeffs().size() + b.coeffs().size() - 1, 0.0);
        for (std::size_t i = 0; i < a.coeffs().size(); ++i)
            for (std::size_t j = 0; j < b.coeffs().size(); ++j) out[i + j] += a.coeffs()[i] * b.coeffs()[j];
        return Poly1(std::move(out));
    };
    for (int i = 1; i <= d; ++i) {
        xp[i] = mul(xp[i - 1], x);
        yp[i] = mul(yp[i - 1], y);
    }
    Poly1 acc;
    for (const auto& [e, c] : p.terms()) acc = acc + mul(xp[e.first], yp[e.second]) * c;
    return acc;
}

Poly2 taylor2(const DerivativeOracle& oracle, const Point2& center, int degree) {
    if (degree < 0) throw InvalidArgument("negative Taylor degree");
    // Σ ∂^βφ(c)/β! (ξ − c)^β, expanded around the origin.
    Poly2 local(degree);
    for (int total = 0; total <= degree; ++total) {
        for (int b1 = 0; b1 <= total; ++b1) {
            const int b2 = total - b1;
            const auto v = oracle(b1, b2, center);
            if (!v) {
                std::ostringstream os;
                os << "oracle has no derivative of order (" << b1 << "," << b2 << ")";
                throw OracleMissingDerivative(os.str());
            }
            local.set(b1, b2, *v / (std::tgamma(b1 + 1.0) * std::tgamma(b2 + 1.0)));
        }
    }
    return compose_affine(local, AffineMap2::translation({-center[0], -center[1]}));
}

}  // namespace affdec
