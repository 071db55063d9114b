#pragma once

// The shifted Manin triple at the point A = S:
//   c   = sum_c f^c g_(-c pq),  b = (c >= 0) part,  b^- = (c <= 0) part,
//   K   = sum_c f^c x^a y^b g_(w0 - c pq - a q - b p), 0 <= a <= p-2, 0 <= b <= q-2,
//       split as n_+ + hPart + n_- by the sign of c,
//   L   = b + (K + hPart)[-1] + b^-[-2]
// with the intersection form I on the Jacobi quotient, omega, mu, nu, the
// pairing B, and the extension by C[eps] with |eps| = 1.

#include "logflat/liecore.hpp"
#include "logflat/linalg.hpp"
#include "logflat/wpoly.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace logflat {

/// I(x^a y^b, x^a' y^b') with scaling constant 1. Throws std::invalid_argument
/// for exponents outside 0 <= a <= p-2, 0 <= b <= q-2.
Rational intersection_form(int a, int b, int a2, int b2, const CurveParams& params);

struct JacobiQuotient {
    std::vector<Monomial> basis;  // x^a y^b, a-major
    Matrix I;
};

JacobiQuotient jacobi_quotient(const CurveParams& params);

/// f^c x^a y^b E_ij.
struct LoopTerm {
    int c = 0;
    int a = 0;
    int b = 0;
    std::size_t i = 0;
    std::size_t j = 0;

    /// "E11", "f*E23", "y*f^-1*E31".
    std::string label(std::size_t n) const;
    friend auto operator<=>(const LoopTerm&, const LoopTerm&) = default;
};

using LoopVector = std::map<LoopTerm, Rational>;

struct TripleBases {
    std::vector<LoopTerm> c;
    std::vector<LoopTerm> b;
    std::vector<LoopTerm> b_minus;
    std::vector<LoopTerm> K;
    std::vector<LoopTerm> n_plus;
    std::vector<LoopTerm> h_part;
    std::vector<LoopTerm> n_minus;
};

TripleBases build_triple(const SemisimpleData& s, const CurveParams& params);

/// How Omega turns f^(c1+c2) I k into a scalar. The two readings agree because
/// k(X1, X2) vanishes unless c1 + c2 = 0.
enum class OmegaReading : std::uint8_t { ConstantTerm, EvaluateAtOne };

enum class Summand : std::uint8_t { B, K, H, BMinus };

struct LBasisElement {
    Summand summand = Summand::B;
    LoopTerm term;
    int degree = 0;
    std::string label;
};

/// A finite graded algebra given by structure constants on a basis and a
/// bilinear form on that basis.
struct GradedAlgebra {
    using Sparse = std::vector<std::pair<std::size_t, Rational>>;

    std::vector<int> degree;
    std::vector<std::vector<Sparse>> table;  // table[i][j] = [e_i, e_j]
    Matrix form;

    std::size_t dim() const { return degree.size(); }
    Vector bracket(const Vector& x, const Vector& y) const;
    Rational pairing(const Vector& x, const Vector& y) const;
};

class ManinTriple {
public:
    ManinTriple(const CurveParams& params, const SemisimpleData& s, OmegaReading reading = OmegaReading::ConstantTerm);

    const CurveParams& params() const { return params_; }
    const TripleBases& bases() const { return bases_; }
    const std::vector<LBasisElement>& basis() const { return basis_; }
    std::size_t dim() const { return basis_.size(); }
    long index_of(Summand s, const LoopTerm& t) const;

    /// omega(k1, k2) = f^(c1+c2) I(x^a1 y^b1, x^a2 y^b2) [X1, X2] in c.
    LoopVector omega(const LoopTerm& k1, const LoopTerm& k2) const;
    LoopVector mu(const LoopTerm& k1, const LoopTerm& k2) const;
    LoopVector nu(const LoopTerm& h1, const LoopTerm& h2) const;
    Rational Omega(const LoopTerm& k1, const LoopTerm& k2) const;

    const GradedAlgebra& L() const { return L_; }
    /// C[eps] (x) L: index k < dim() is e_k, index dim() + k is eps e_k.
    const GradedAlgebra& extended() const { return ext_; }

    /// Columns: images of b, n_+ + hPart under (b, n, h) -> (b, n + h, h, 0).
    Matrix plus_embedding() const;
    /// Columns: images of n_- + hPart, b^- under (n, h, u) -> (0, n + h, -h, u).
    Matrix minus_embedding() const;

private:
    Vector loop_to_summand(const LoopVector& v, Summand s) const;

    CurveParams params_;
    SemisimpleData s_;
    OmegaReading reading_;
    TripleBases bases_;
    std::vector<LBasisElement> basis_;
    std::map<std::pair<Summand, LoopTerm>, std::size_t> index_;
    GradedAlgebra L_;
    GradedAlgebra ext_;
};

struct ManinCheck {
    std::string name;
    bool pass = false;
    std::string witness;  // first failing basis tuple, empty on success
};

struct ManinReport {
    std::size_t jacobi_dim = 0;
    std::size_t dim_L = 0;
    std::size_t dim_K = 0;
    std::size_t dim_b = 0;
    std::size_t dim_h = 0;
    std::vector<ManinCheck> checks;
    bool all_pass() const;
};

/// Runs every axiom of the triple, the extension and the subalgebra M as exact
/// checks on basis tuples.
ManinReport verify_manin(const SemisimpleData& s, const CurveParams& params,
                         OmegaReading reading = OmegaReading::ConstantTerm);

}  // namespace logflat
