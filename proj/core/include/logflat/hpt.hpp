#pragma once

// Homological perturbation for finite based cochain complexes. A contraction
// (a, b, h) between (small, d_s) and (big, d_b) satisfies b a = id,
// d_b h + h d_b = id - a b and the side conditions h a = 0, b h = 0, h h = 0.
// Perturbing d_b by t with h t nilpotent gives
//   A  = sum_k (-t h)^k t
//   d_s' = d_s + b A a,  a' = a - h A a,  b' = b - b A h,  h' = h - h A h.

#include "logflat/linalg.hpp"
#include "logflat/logdgla.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace logflat {

/// Dimensions of a complex in degrees 0 .. size()-1.
using Dims = std::vector<std::size_t>;

/// A family of matrices C^k -> D^(k + shift). Blocks whose target degree is
/// out of range have zero rows.
class GradedMap {
public:
    GradedMap() = default;
    GradedMap(Dims src, Dims dst, int shift);

    static GradedMap identity(const Dims& dims);

    const Dims& src() const { return src_; }
    const Dims& dst() const { return dst_; }
    int shift() const { return shift_; }
    std::size_t degrees() const { return src_.size(); }

    Matrix& block(int k) { return blocks_.at(static_cast<std::size_t>(k)); }
    const Matrix& block(int k) const { return blocks_.at(static_cast<std::size_t>(k)); }

    bool is_zero() const;

    GradedMap& operator+=(const GradedMap& other);
    GradedMap& operator-=(const GradedMap& other);
    GradedMap& operator*=(const Rational& s);
    friend GradedMap operator+(GradedMap a, const GradedMap& b) { return a += b; }
    friend GradedMap operator-(GradedMap a, const GradedMap& b) { return a -= b; }
    friend GradedMap operator*(const Rational& s, GradedMap a) { return a *= s; }
    /// Composition: (f * g) = f after g.
    friend GradedMap operator*(const GradedMap& f, const GradedMap& g);
    friend bool operator==(const GradedMap&, const GradedMap&) = default;

private:
    Dims src_;
    Dims dst_;
    int shift_ = 0;
    std::vector<Matrix> blocks_;
};

struct Complex {
    Dims dims;
    GradedMap d;  // shift +1

    static Complex zero_differential(const Dims& dims);
};

struct Contraction {
    Complex small;
    Complex big;
    GradedMap a;  // small -> big, shift 0
    GradedMap b;  // big -> small, shift 0
    GradedMap h;  // big -> big, shift -1
};

struct IdentityCheck {
    std::string name;
    bool pass = false;
    /// Source degree and basis index of the first column where the identity fails.
    std::optional<int> degree;
    std::optional<std::size_t> column;
};

struct ContractionReport {
    std::vector<IdentityCheck> checks;
    bool all_pass() const;
};

/// Checks the differentials, chain maps, b a = id, the homotopy equation and
/// the three side conditions. Throws std::invalid_argument on shape mismatch.
ContractionReport verify_contraction(const Contraction& c);

/// Smallest k with m^k = 0 for a degree-0 endomorphism, if any k <= bound.
std::optional<std::size_t> nilpotence_exponent(const GradedMap& m, std::size_t bound);

struct PerturbationResult {
    Contraction contraction;   // with big.d replaced by d + t
    std::size_t exponent = 0;  // (h t)^exponent = 0
    std::size_t series_terms = 0;  // nonzero terms of A
};

/// Throws std::domain_error when h t is not nilpotent.
PerturbationResult perturb(const Contraction& c, const GradedMap& t);

/// The inclusion H(U_0) -> U_0 with a weight-compatible complement to H^0 made
/// of basis vectors (first-fit in basis order) and h = (delta|_C)^-1 on the image.
struct U0Contraction {
    U0Complex u0;
    U0Cohomology cohomology;
    std::vector<std::size_t> complement;  // basis0 indices spanning C
    Contraction contraction;
};

U0Contraction u0_contraction(const DglaContext& ctx);

/// ad_gamma on U_0 for gamma a U_0^1 element given by its beta coefficient.
GradedMap u0_perturbation(const U0Complex& u0, const PolyMatrix& gamma);

/// The eigenvalue-0 contraction on a finite direct sum of slices: a is the
/// inclusion of the u = 0 slice, b the projection onto it, h = iota_E / u.
struct SliceContraction {
    std::vector<ComplexSlice> slices;
    Contraction contraction;
    /// Offset of each slice inside the big complex, per degree.
    std::vector<Dims> offsets;
};

SliceContraction slice_contraction(const DglaContext& ctx, const std::vector<Rational>& eigenvalues);

/// ad_w on the direct sum for w of eigenvalue 0 and degree 1.
GradedMap slice_perturbation(const SliceContraction& sc, const DglaElement& w);

}  // namespace logflat
