#pragma once

// Weighted polynomials in x, y for the curve x^p = y^q, graded by the Euler
// field E = q x d/dx + p y d/dy (|x| = q, |y| = p), together with the vector
// field V = q y^(q-1) d/dx + p x^(p-1) d/dy of weight w0 = pq - p - q.

#include "logflat/linalg.hpp"
#include "logflat/rational.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace logflat {

inline constexpr std::int64_t kDefaultWeightCap = 300;

class CurveParams {
public:
    /// Throws InputError unless 0 < p < q and gcd(p, q) = 1.
    CurveParams(std::int64_t p, std::int64_t q);

    std::int64_t p() const { return p_; }
    std::int64_t q() const { return q_; }
    std::int64_t pq() const { return p_ * q_; }
    /// Weight of V, pq - p - q.
    std::int64_t w0() const { return w0_; }

    friend bool operator==(const CurveParams&, const CurveParams&) = default;

private:
    std::int64_t p_;
    std::int64_t q_;
    std::int64_t w0_;
};

struct Monomial {
    int x = 0;
    int y = 0;

    std::int64_t weight(const CurveParams& params) const { return x * params.q() + y * params.p(); }
    /// "1", "x", "x^2*y^5", ...
    std::string label() const;

    friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

/// w = a q + b p + c pq with 0 <= a < p, 0 <= b < q.
struct WeightIndex {
    std::int64_t w = 0;
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::int64_t c = 0;

    friend bool operator==(const WeightIndex&, const WeightIndex&) = default;
};

class WeightedPolynomial {
public:
    using TermMap = std::map<Monomial, Rational>;

    WeightedPolynomial() = default;

    static WeightedPolynomial constant(const Rational& c);
    static WeightedPolynomial monomial(Monomial m, const Rational& coef = 1);
    /// f^c with f = x^p - y^q.
    static WeightedPolynomial f_power(const CurveParams& params, int c);

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Rational coefficient(Monomial m) const;
    Rational constant_term() const { return coefficient({0, 0}); }

    /// Adds coef * m, dropping the entry if it cancels.
    void add_term(Monomial m, const Rational& coef);

    /// Common weight of all terms; nullopt for zero or inhomogeneous polynomials.
    std::optional<std::int64_t> weight(const CurveParams& params) const;
    bool is_homogeneous(const CurveParams& params) const;

    WeightedPolynomial derivative_x() const;
    WeightedPolynomial derivative_y() const;

    WeightedPolynomial& operator+=(const WeightedPolynomial& other);
    WeightedPolynomial& operator-=(const WeightedPolynomial& other);
    WeightedPolynomial& operator*=(const Rational& s);

    friend WeightedPolynomial operator+(WeightedPolynomial a, const WeightedPolynomial& b) { return a += b; }
    friend WeightedPolynomial operator-(WeightedPolynomial a, const WeightedPolynomial& b) { return a -= b; }
    friend WeightedPolynomial operator-(WeightedPolynomial a) { return a *= Rational(-1); }
    friend WeightedPolynomial operator*(WeightedPolynomial a, const Rational& s) { return a *= s; }
    friend WeightedPolynomial operator*(const Rational& s, WeightedPolynomial a) { return a *= s; }
    friend WeightedPolynomial operator*(const WeightedPolynomial& a, const WeightedPolynomial& b);
    friend bool operator==(const WeightedPolynomial&, const WeightedPolynomial&) = default;

    std::string to_string() const;

private:
    TermMap terms_;
};

WeightIndex weight_decompose(std::int64_t w, const CurveParams& params);

/// Basis of O_w in decreasing x-exponent: x^(a+cp) y^b, ..., x^a y^(b+cq).
std::vector<Monomial> weight_basis(std::int64_t w, const CurveParams& params);

WeightedPolynomial apply_E(const WeightedPolynomial& g, const CurveParams& params);
WeightedPolynomial apply_V(const WeightedPolynomial& g, const CurveParams& params);

/// Coordinates of a weight-w polynomial in weight_basis(w); throws if g has a
/// term outside O_w.
Vector coordinates(const WeightedPolynomial& g, const std::vector<Monomial>& basis);
WeightedPolynomial from_coordinates(const Vector& coords, const std::vector<Monomial>& basis);

/// Matrix of V : O_w -> O_(w + w0) in the weight bases.
Matrix V_matrix(std::int64_t w, const CurveParams& params);

/// Basis of ker(V) in O_w: [f^(w/pq)] when pq | w, else empty. Requires w >= 0.
std::vector<WeightedPolynomial> kernel_V(std::int64_t w, const CurveParams& params);

/// Cokernel representative [f^c x^a y^b] of V : O_(w-w0) -> O_w when
/// a <= p-2, b <= q-2, c >= 0; else empty. Requires w >= 0.
std::vector<WeightedPolynomial> cokernel_V_basis(std::int64_t w, const CurveParams& params);

/// Matrix of (lambda, g) -> lambda f^c x^a y^b + V(g) from C + O_(w-w0) to O_w.
Matrix matrix_M(std::int64_t w, const CurveParams& params);

/// det of matrix_M; throws std::domain_error where no cokernel representative exists.
Rational matrix_M_determinant(std::int64_t w, const CurveParams& params);

}  // namespace logflat
