#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace affdec {

using Point2 = std::array<double, 2>;
using Exponent = std::pair<int, int>;

struct Mat2 {
    double a = 1, b = 0, c = 0, d = 1;  // [[a, b], [c, d]]

    double det() const { return a * d - b * c; }
    Point2 apply(const Point2& p) const { return {a * p[0] + b * p[1], c * p[0] + d * p[1]}; }
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 inverse() const;
    Mat2 transpose() const { return {a, c, b, d}; }
    static Mat2 identity() { return {}; }
    static Mat2 diag(double x, double y) { return {x, 0, 0, y}; }
    static Mat2 rotation(double angle);
};

/// ξ ↦ L ξ + b.
struct AffineMap2 {
    Mat2 linear;
    Point2 shift{0, 0};

    Point2 operator()(const Point2& p) const {
        auto q = linear.apply(p);
        return {q[0] + shift[0], q[1] + shift[1]};
    }
    AffineMap2 inverse() const;
    AffineMap2 compose(const AffineMap2& inner) const;  // this ∘ inner
    static AffineMap2 identity() { return {}; }
    static AffineMap2 translation(Point2 t) { return {Mat2::identity(), t}; }
};

/// Univariate polynomial, coefficient i multiplies x^i.
class Poly1 {
public:
    Poly1() = default;
    explicit Poly1(std::vector<double> coeffs);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    double coeff(int i) const { return i < static_cast<int>(coeffs_.size()) ? coeffs_[i] : 0.0; }
    double operator()(double x) const;
    Poly1 derivative() const;
    double norm() const;
    bool is_zero() const { return coeffs_.empty(); }
    /// p(s x + t)
    Poly1 compose_affine(double s, double t) const;
    Poly1 operator*(double s) const;
    Poly1 operator+(const Poly1& o) const;
    Poly1 operator-(const Poly1& o) const;

private:
    void trim();
    std::vector<double> coeffs_;
};

/// Bivariate real polynomial Σ c_α ξ₁^α₁ ξ₂^α₂ with |α| ≤ max_degree.
/// Zero coefficients are never stored.
class Poly2 {
public:
    Poly2() = default;
    explicit Poly2(int max_degree) : degree_(max_degree) {}
    Poly2(int max_degree, std::initializer_list<std::pair<const Exponent, double>> terms);

    static Poly2 constant(double c, int max_degree = 0);
    static Poly2 monomial(int a1, int a2, double c = 1.0);
    static Poly2 from_poly1(const Poly1& p, int variable = 0);

    int max_degree() const { return degree_; }
    /// Largest |α| actually present (−1 for the zero polynomial).
    int true_degree() const;
    const std::map<Exponent, double>& terms() const { return terms_; }
    double coeff(int a1, int a2) const;
    void set(int a1, int a2, double c);
    void add(int a1, int a2, double c);
    bool is_zero() const { return terms_.empty(); }

    double operator()(const Point2& xi) const { return eval(xi); }
    double eval(const Point2& xi) const;

    Poly2 operator+(const Poly2& o) const;
    Poly2 operator-(const Poly2& o) const;
    Poly2 operator*(const Poly2& o) const;
    Poly2 operator*(double s) const;
    Poly2 operator-() const { return *this * -1.0; }

    Poly2 with_degree(int d) const;
    /// Drops coefficients whose magnitude is ≤ tol.
    Poly2 pruned(double tol) const;

private:
    int degree_ = 0;
    std::map<Exponent, double> terms_;
};

double coeff_norm(const Poly2& p);
Poly2 derivative(const Poly2& p, int a1, int a2);
Poly2 hessian_det(const Poly2& p);
Poly2 compose_affine(const Poly2& p, const AffineMap2& t);
/// φ∘T − ∇(φ∘T)(0)·ξ − φ∘T(0).
Poly2 recentred(const Poly2& phi, const AffineMap2& t);

struct Normalized {
    Poly2 poly;
    double scale;
};
/// (ψ/‖ψ‖, ‖ψ‖); throws ZeroPolynomial for ψ = 0.
Normalized normalize(const Poly2& psi);

/// Restriction of p to the line s ↦ base + s·dir.
Poly1 restrict_to_line(const Poly2& p, const Point2& base, const Point2& dir);

/// Supplies ∂^β φ(point) for β = (b1, b2), or nullopt when unavailable.
using DerivativeOracle = std::function<std::optional<double>(int b1, int b2, const Point2& point)>;

Poly2 taylor2(const DerivativeOracle& oracle, const Point2& center, int degree);

}  // namespace affdec
