#pragma once

// gl_n with a rational diagonal semisimple element S: ad_S eigenspaces,
// support patterns for G_S and P_S, nilpotent orbit data, exponentials.

#include "logflat/linalg.hpp"
#include "logflat/rational.hpp"
#include "logflat/wpoly.hpp"

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace logflat {

/// An element of gl_n stored densely.
using LieMatrix = Matrix;

using IndexPair = std::pair<std::size_t, std::size_t>;

class SemisimpleData {
public:
    explicit SemisimpleData(std::vector<Rational> diag);

    std::size_t n() const { return diag_.size(); }
    const std::vector<Rational>& diag() const { return diag_; }
    const Rational& operator[](std::size_t i) const { return diag_[i]; }

    /// Eigenvalue of ad_S on E_ij.
    Rational ad_eigenvalue(std::size_t i, std::size_t j) const { return diag_[i] - diag_[j]; }
    /// Distinct eigenvalues of ad_S, ascending.
    std::vector<Rational> ad_spectrum() const;

    LieMatrix as_matrix() const;

private:
    std::vector<Rational> diag_;
};

class SupportPattern {
public:
    SupportPattern(std::size_t n, std::set<IndexPair> allowed);

    std::size_t n() const { return n_; }
    const std::set<IndexPair>& allowed() const { return allowed_; }
    bool contains(std::size_t i, std::size_t j) const { return allowed_.contains({i, j}); }
    std::size_t dimension() const { return allowed_.size(); }

    /// (i,j), (j,k) allowed implies (i,k) allowed.
    bool is_closed() const;
    bool supports(const LieMatrix& x) const;

    friend bool operator==(const SupportPattern&, const SupportPattern&) = default;

private:
    std::size_t n_;
    std::set<IndexPair> allowed_;
};

/// Ranks of N^k for k = 1..n.
struct JordanType {
    std::vector<std::size_t> ranks;
    friend bool operator==(const JordanType&, const JordanType&) = default;
};

LieMatrix elementary(std::size_t n, std::size_t i, std::size_t j);
/// "E12" (1-based) for n < 10, "E_{10,11}" otherwise.
std::string elementary_label(std::size_t n, std::size_t i, std::size_t j);

LieMatrix bracket(const LieMatrix& x, const LieMatrix& y);
/// Invariant form k(X, Y) = tr(XY).
Rational trace_form(const LieMatrix& x, const LieMatrix& y);

/// Elementary matrices E_ij with diag[i] - diag[j] = lambda, row-major.
std::vector<IndexPair> ad_eigenspace(const SemisimpleData& s, const Rational& lambda);

/// G_S: (i,j) allowed iff diag[i] = diag[j].
SupportPattern centralizer_pattern(const SemisimpleData& s);

/// P_S: (i,j) allowed iff diag[j] - diag[i] is a non-negative multiple of pq.
SupportPattern parabolic_pattern(const SemisimpleData& s, const CurveParams& params);

/// d chi: keep the Levi (G_S) entries. Throws std::invalid_argument if x is
/// not supported on the parabolic pattern.
LieMatrix levi_projection(const LieMatrix& x, const SemisimpleData& s, const CurveParams& params);

bool is_nilpotent(const LieMatrix& x);
/// Throws std::domain_error for non-nilpotent input.
JordanType jordan_type(const LieMatrix& nilpotent);

/// Index blocks of a pattern: connected components of its support graph.
std::vector<std::vector<std::size_t>> pattern_blocks(const SupportPattern& pattern);

/// Same adjoint orbit under the block group of the pattern: blockwise Jordan
/// types agree. Throws for non-nilpotent input or support outside the pattern.
bool orbit_member(const LieMatrix& n, const LieMatrix& n0, const SupportPattern& pattern);

/// Finite exponential series; throws std::domain_error for non-nilpotent X.
LieMatrix exp_nilpotent(const LieMatrix& x);

/// Every positive integer eigenvalue of ad_S exceeds w0.
bool is_large_enough(const SemisimpleData& s, const CurveParams& params);

}  // namespace logflat
