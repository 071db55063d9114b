#include "logflat/liecore.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace logflat {

SemisimpleData::SemisimpleData(std::vector<Rational> diag) : diag_(std::move(diag))
{
    if (diag_.empty()) throw InputError("S must have at least one diagonal entry");
    for (auto& d : diag_) d.canonicalize();
}

std::vector<Rational> SemisimpleData::ad_spectrum() const
{
    std::set<Rational> values;
    for (std::size_t i = 0; i < n(); ++i)
        for (std::size_t j = 0; j < n(); ++j) values.insert(ad_eigenvalue(i, j));
    return {values.begin(), values.end()};
}

LieMatrix SemisimpleData::as_matrix() const
{
    LieMatrix m(n(), n());
    for (std::size_t i = 0; i < n(); ++i) m(i, i) = diag_[i];
    return m;
}

SupportPattern::SupportPattern(std::size_t n, std::set<IndexPair> allowed) : n_(n), allowed_(std::move(allowed))
{
    for (const auto& [i, j] : allowed_) {
        if (i >= n_ || j >= n_) throw std::invalid_argument("support pattern index out of range");
    }
}

bool SupportPattern::is_closed() const
{
    for (const auto& [i, j] : allowed_)
        for (const auto& [j2, k] : allowed_)
            if (j == j2 && !contains(i, k)) return false;
    return true;
}

bool SupportPattern::supports(const LieMatrix& x) const
{
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
            if (x(i, j) != 0 && !contains(i, j)) return false;
    return true;
}

LieMatrix elementary(std::size_t n, std::size_t i, std::size_t j)
{
    LieMatrix m(n, n);
    m(i, j) = 1;
    return m;
}

std::string elementary_label(std::size_t n, std::size_t i, std::size_t j)
{
    if (n < 10) return "E" + std::to_string(i + 1) + std::to_string(j + 1);
    return "E_{" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "}";
}

LieMatrix bracket(const LieMatrix& x, const LieMatrix& y) { return x * y - y * x; }

Rational trace_form(const LieMatrix& x, const LieMatrix& y)
{
    Rational t = 0;
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t k = 0; k < x.cols(); ++k)
            if (x(i, k) != 0 && y(k, i) != 0) t += x(i, k) * y(k, i);
    return t;
}

std::vector<IndexPair> ad_eigenspace(const SemisimpleData& s, const Rational& lambda)
{
    std::vector<IndexPair> out;
    for (std::size_t i = 0; i < s.n(); ++i)
        for (std::size_t j = 0; j < s.n(); ++j)
            if (s.ad_eigenvalue(i, j) == lambda) out.emplace_back(i, j);
    return out;
}

SupportPattern centralizer_pattern(const SemisimpleData& s)
{
    return SupportPattern(s.n(), [&] {
        std::set<IndexPair> allowed;
        for (const auto& ij : ad_eigenspace(s, 0)) allowed.insert(ij);
        return allowed;
    }());
}

SupportPattern parabolic_pattern(const SemisimpleData& s, const CurveParams& params)
{
    std::set<IndexPair> allowed;
    for (std::size_t i = 0; i < s.n(); ++i) {
        for (std::size_t j = 0; j < s.n(); ++j) {
            const Rational c = (s[j] - s[i]) / params.pq();
            if (is_integer(c) && c >= 0) allowed.emplace(i, j);
        }
    }
    return SupportPattern(s.n(), std::move(allowed));
}

LieMatrix levi_projection(const LieMatrix& x, const SemisimpleData& s, const CurveParams& params)
{
    if (!parabolic_pattern(s, params).supports(x)) {
        throw std::invalid_argument("levi_projection: element is not in Lie(P_S)");
    }
    LieMatrix out(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
            if (s[i] == s[j]) out(i, j) = x(i, j);
    return out;
}

bool is_nilpotent(const LieMatrix& x)
{
    LieMatrix power = x;
    for (std::size_t k = 1; k < x.rows(); ++k) power = power * x;
    return x.rows() == 0 || power.is_zero();
}

JordanType jordan_type(const LieMatrix& nilpotent)
{
    if (!is_nilpotent(nilpotent)) throw std::domain_error("jordan_type: matrix is not nilpotent");
    JordanType out;
    LieMatrix power = nilpotent;
    for (std::size_t k = 1; k <= nilpotent.rows(); ++k) {
        out.ranks.push_back(rank(power));
        power = power * nilpotent;
    }
    return out;
}

std::vector<std::vector<std::size_t>> pattern_blocks(const SupportPattern& pattern)
{
    std::vector<std::size_t> parent(pattern.n());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t v) {
        return parent[v] == v ? v : parent[v] = find(parent[v]);
    };
    for (const auto& [i, j] : pattern.allowed()) parent[find(i)] = find(j);
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<long> block_of(pattern.n(), -1);
    for (std::size_t v = 0; v < pattern.n(); ++v) {
        const std::size_t root = find(v);
        if (block_of[root] < 0) {
            block_of[root] = static_cast<long>(blocks.size());
            blocks.emplace_back();
        }
        blocks[static_cast<std::size_t>(block_of[root])].push_back(v);
    }
    return blocks;
}

namespace {

LieMatrix restrict_to(const LieMatrix& m, const std::vector<std::size_t>& idx)
{
    LieMatrix out(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t c = 0; c < idx.size(); ++c) out(r, c) = m(idx[r], idx[c]);
    return out;
}

}  // namespace

bool orbit_member(const LieMatrix& n, const LieMatrix& n0, const SupportPattern& pattern)
{
    if (!pattern.supports(n) || !pattern.supports(n0)) {
        throw std::invalid_argument("orbit_member: element outside the block pattern");
    }
    if (!is_nilpotent(n) || !is_nilpotent(n0)) throw std::domain_error("orbit_member: non-nilpotent input");
    for (const auto& blk : pattern_blocks(pattern)) {
        if (jordan_type(restrict_to(n, blk)) != jordan_type(restrict_to(n0, blk))) return false;
    }
    return true;
}

LieMatrix exp_nilpotent(const LieMatrix& x)
{
    if (!is_nilpotent(x)) throw std::domain_error("exp_nilpotent: matrix is not nilpotent");
    LieMatrix out = Matrix::identity(x.rows());
    LieMatrix term = Matrix::identity(x.rows());
    for (std::size_t k = 1; k < x.rows(); ++k) {
        term = term * x * Rational(1, static_cast<unsigned long>(k));
        if (term.is_zero()) break;
        out += term;
    }
    return out;
}

bool is_large_enough(const SemisimpleData& s, const CurveParams& params)
{
    for (const auto& lambda : s.ad_spectrum()) {
        if (lambda > 0 && is_integer(lambda) && lambda <= params.w0()) return false;
    }
    return true;
}

}  // namespace logflat
