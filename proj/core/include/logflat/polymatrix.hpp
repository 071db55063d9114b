#pragma once

// n x n matrices with entries in Q[x, y]: elements of O (x) gl_n, used for
// connection components, gauge transformations and curvature.

#include "logflat/liecore.hpp"
#include "logflat/wpoly.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace logflat {

class PolyMatrix {
public:
    PolyMatrix() = default;
    explicit PolyMatrix(std::size_t n) : n_(n), entries_(n * n) {}

    static PolyMatrix identity(std::size_t n);
    static PolyMatrix from_constant(const LieMatrix& m);
    static PolyMatrix single(std::size_t n, std::size_t i, std::size_t j, WeightedPolynomial g);

    std::size_t n() const { return n_; }
    WeightedPolynomial& operator()(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }
    const WeightedPolynomial& operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }

    bool is_zero() const;
    /// Value at the origin (the constant terms).
    LieMatrix at_origin() const;

    PolyMatrix& operator+=(const PolyMatrix& other);
    PolyMatrix& operator-=(const PolyMatrix& other);
    PolyMatrix& operator*=(const Rational& s);

    friend PolyMatrix operator+(PolyMatrix a, const PolyMatrix& b) { return a += b; }
    friend PolyMatrix operator-(PolyMatrix a, const PolyMatrix& b) { return a -= b; }
    friend PolyMatrix operator-(PolyMatrix a) { return a *= Rational(-1); }
    friend PolyMatrix operator*(PolyMatrix a, const Rational& s) { return a *= s; }
    friend PolyMatrix operator*(const Rational& s, PolyMatrix a) { return a *= s; }
    friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);
    friend bool operator==(const PolyMatrix&, const PolyMatrix&) = default;

    std::string to_string() const;

private:
    std::size_t n_ = 0;
    std::vector<WeightedPolynomial> entries_;
};

PolyMatrix bracket(const PolyMatrix& a, const PolyMatrix& b);
PolyMatrix apply_V(const PolyMatrix& m, const CurveParams& params);
PolyMatrix apply_E(const PolyMatrix& m, const CurveParams& params);

/// True when m^n = 0 over Q[x, y].
bool is_nilpotent(const PolyMatrix& m);
/// Finite exponential of a nilpotent polynomial matrix.
PolyMatrix exp_nilpotent(const PolyMatrix& m);

}  // namespace logflat
