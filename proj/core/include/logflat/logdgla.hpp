#pragma once

// The logarithmic de Rham dgla Omega^*(log D) (x) gl_n for D = {x^p = y^q},
// realized on finite L_S-eigenvalue slices. The log cotangent bundle has the
// frame alpha0, beta dual to (E, V); alpha0 ^ beta is the canonical 2-form,
// so d(g) = E(g) alpha0 + V(g) beta and d(beta) = -w0 alpha0 ^ beta.

#include "logflat/liecore.hpp"
#include "logflat/linalg.hpp"
#include "logflat/polymatrix.hpp"
#include "logflat/wpoly.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace logflat {

class TruncationOverflow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Form : std::uint8_t { One = 0, Alpha0 = 1, Beta = 2, Alpha0Beta = 3 };

int form_degree(Form f);
/// L_E eigenvalue of the form: 0, 0, -w0, -w0.
std::int64_t form_weight_shift(Form f, const CurveParams& params);
std::string form_label(Form f);

/// Everything the dgla operators depend on.
struct DglaContext {
    CurveParams params;
    SemisimpleData s;
    std::int64_t w_max = kDefaultWeightCap;

    std::size_t n() const { return s.n(); }
};

/// monomial (x) E_ij (x) form.
struct Term {
    Monomial mono;
    std::size_t i = 0;
    std::size_t j = 0;
    Form form = Form::One;

    friend auto operator<=>(const Term&, const Term&) = default;
};

std::string term_label(const Term& t, std::size_t n);
/// L_S eigenvalue of a basis term.
Rational eigenvalue(const Term& t, const DglaContext& ctx);

class DglaElement {
public:
    explicit DglaElement(int degree = 0);

    int degree() const { return degree_; }
    const std::map<Term, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Rational coefficient(const Term& t) const;

    /// Throws std::invalid_argument if the term's degree differs from degree().
    void add(const Term& t, const Rational& coef);

    DglaElement& operator+=(const DglaElement& other);
    DglaElement& operator-=(const DglaElement& other);
    DglaElement& operator*=(const Rational& s);

    friend DglaElement operator+(DglaElement a, const DglaElement& b) { return a += b; }
    friend DglaElement operator-(DglaElement a, const DglaElement& b) { return a -= b; }
    friend DglaElement operator*(const Rational& s, DglaElement a) { return a *= s; }
    friend bool operator==(const DglaElement&, const DglaElement&) = default;

    /// Polynomial-matrix coefficient of one form.
    PolyMatrix component(Form f, std::size_t n) const;
    static DglaElement from_component(const PolyMatrix& m, Form f);

    std::string to_string(std::size_t n) const;

private:
    int degree_;
    std::map<Term, Rational> terms_;
};

DglaElement differential_d(const DglaElement& x, const CurveParams& params);
/// d + alpha0 ad_S.
DglaElement delta_S(const DglaElement& x, const DglaContext& ctx);
DglaElement iota_E(const DglaElement& x);
DglaElement lie_LE(const DglaElement& x, const CurveParams& params);
/// alpha0 iota_E; keeps the alpha0 and alpha0^beta parts.
DglaElement projector_P(const DglaElement& x);
/// alpha0 ^ ad_S.
DglaElement alpha0_ad_S(const DglaElement& x, const DglaContext& ctx);
/// Graded bracket [w X, v Y] = (w ^ v) [X, Y]; throws std::domain_error when
/// the degrees add up past 2.
DglaElement bracket(const DglaElement& x, const DglaElement& y);

/// h(x) = iota_E(sum over u != 0 of x_u / u).
DglaElement homotopy_h(const DglaElement& x, const DglaContext& ctx);

/// Split of an element into its L_S eigencomponents.
std::map<Rational, DglaElement> eigen_decompose(const DglaElement& x, const DglaContext& ctx);

/// The u-eigenspace of L_S with all operators as matrices. Bases are ordered by
/// (form, weight, decreasing x-exponent, row-major (i,j)).
class ComplexSlice {
public:
    ComplexSlice(Rational u, const DglaContext& ctx);

    const Rational& eigenvalue() const { return u_; }
    const std::vector<Term>& basis(int degree) const { return bases_.at(static_cast<std::size_t>(degree)); }
    std::size_t dim(int degree) const;
    std::size_t total_dim() const { return dim(0) + dim(1) + dim(2); }

    /// Index of a term in the degree basis, or -1.
    long index_of(const Term& t) const;

    Vector coordinates(const DglaElement& x) const;
    DglaElement element(int degree, const Vector& coords) const;

    // Graded operators, indexed by source degree 0..2. Target degree out of
    // range gives a 0-row (or 0-column) matrix.
    const Matrix& delta_S(int degree) const { return delta_.at(static_cast<std::size_t>(degree)); }
    const Matrix& d(int degree) const { return d_.at(static_cast<std::size_t>(degree)); }
    const Matrix& iota_E(int degree) const { return iota_.at(static_cast<std::size_t>(degree)); }
    const Matrix& P(int degree) const { return p_.at(static_cast<std::size_t>(degree)); }
    const Matrix& L_E(int degree) const { return le_.at(static_cast<std::size_t>(degree)); }
    const Matrix& alpha0_ad_S(int degree) const { return aads_.at(static_cast<std::size_t>(degree)); }

    /// iota_E / u for u != 0, zero on the u = 0 slice.
    Matrix homotopy(int degree) const;
    /// ad_w on this slice for an eigenvalue-0 element w of degree k; maps
    /// degree -> degree + k.
    Matrix ad(const DglaElement& w, int degree) const;

    /// Apply a degree-preserving or degree-shifting operator to each basis
    /// vector and record coordinates.
    template <class Op>
    Matrix operator_matrix(int src_degree, int dst_degree, Op&& op) const;

private:
    Rational u_;
    DglaContext ctx_;
    std::array<std::vector<Term>, 3> bases_;
    std::map<Term, std::size_t> index_;
    std::array<Matrix, 3> delta_, d_, iota_, p_, le_, aads_;
};

/// All eigenvalues u of L_S with u_min <= u <= u_max carrying a nonzero slice.
std::vector<Rational> slice_eigenvalues(const DglaContext& ctx, const Rational& u_min, const Rational& u_max);

/// The finite dgla (U_0, delta_S): U_0^0 = sum O_w (x) g_(-w) and
/// U_0^1 = sum O_w (x) g_(w0-w) beta, with delta_S = V (x) id.
struct U0Complex {
    std::vector<Term> basis0;
    std::vector<Term> basis1;
    Matrix delta;  // dim1 x dim0

    std::vector<std::string> labels0(std::size_t n) const;
    std::vector<std::string> labels1(std::size_t n) const;
};

U0Complex U0_complex(const DglaContext& ctx);

/// f^c x^a y^b (x) E_ij, with (a, b) = (0, 0) for degree-0 classes.
struct CohomologyClass {
    int c = 0;
    int a = 0;
    int b = 0;
    std::size_t i = 0;
    std::size_t j = 0;

    std::int64_t weight(const CurveParams& params) const;
    WeightedPolynomial polynomial(const CurveParams& params) const;
    /// "E11", "f*E23", "y^2*f*E13".
    std::string label(std::size_t n) const;

    friend auto operator<=>(const CohomologyClass&, const CohomologyClass&) = default;
};

struct U0Cohomology {
    std::vector<CohomologyClass> h0;
    std::vector<CohomologyClass> h1;
    Matrix h0_vectors;  // dim U_0^0 x |h0|, columns are the classes in basis0 coordinates
    Matrix h1_vectors;  // dim U_0^1 x |h1|
};

/// H^0 = sum_c f^c g_(-c pq); H^1 = sum over cokernel representatives of V.
U0Cohomology cohomology_U0(const DglaContext& ctx, const U0Complex& u0);

/// U_0 coordinates <-> polynomial matrices.
Vector u0_coordinates(const PolyMatrix& m, const std::vector<Term>& basis);
PolyMatrix u0_matrix(const Vector& coords, const std::vector<Term>& basis, std::size_t n);

template <class Op>
Matrix ComplexSlice::operator_matrix(int src_degree, int dst_degree, Op&& op) const
{
    const std::size_t rows = (dst_degree < 0 || dst_degree > 2) ? 0 : dim(dst_degree);
    Matrix m(rows, dim(src_degree));
    for (std::size_t c = 0; c < dim(src_degree); ++c) {
        DglaElement e(src_degree);
        e.add(basis(src_degree)[c], 1);
        const DglaElement image = op(e);
        if (rows == 0) {
            if (!image.is_zero()) throw std::logic_error("operator leaves the graded range");
            continue;
        }
        m.set_column(c, coordinates(image));
    }
    return m;
}

}  // namespace logflat
