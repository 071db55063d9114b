#include "logflat/polymatrix.hpp"

#include <sstream>
#include <stdexcept>

namespace logflat {

PolyMatrix PolyMatrix::identity(std::size_t n)
{
    PolyMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = WeightedPolynomial::constant(1);
    return m;
}

PolyMatrix PolyMatrix::from_constant(const LieMatrix& c)
{
    if (c.rows() != c.cols()) throw std::invalid_argument("PolyMatrix::from_constant: not square");
    PolyMatrix m(c.rows());
    for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = 0; j < c.cols(); ++j) m(i, j) = WeightedPolynomial::constant(c(i, j));
    return m;
}

PolyMatrix PolyMatrix::single(std::size_t n, std::size_t i, std::size_t j, WeightedPolynomial g)
{
    PolyMatrix m(n);
    m(i, j) = std::move(g);
    return m;
}

bool PolyMatrix::is_zero() const
{
    for (const auto& e : entries_) {
        if (!e.is_zero()) return false;
    }
    return true;
}

LieMatrix PolyMatrix::at_origin() const
{
    LieMatrix m(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) m(i, j) = (*this)(i, j).constant_term();
    return m;
}

PolyMatrix& PolyMatrix::operator+=(const PolyMatrix& other)
{
    if (n_ != other.n_) throw std::invalid_argument("PolyMatrix size mismatch");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += other.entries_[k];
    return *this;
}

PolyMatrix& PolyMatrix::operator-=(const PolyMatrix& other)
{
    if (n_ != other.n_) throw std::invalid_argument("PolyMatrix size mismatch");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= other.entries_[k];
    return *this;
}

PolyMatrix& PolyMatrix::operator*=(const Rational& s)
{
    for (auto& e : entries_) e *= s;
    return *this;
}

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b)
{
    if (a.n_ != b.n_) throw std::invalid_argument("PolyMatrix size mismatch");
    PolyMatrix out(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i)
        for (std::size_t k = 0; k < a.n_; ++k) {
            if (a(i, k).is_zero()) continue;
            for (std::size_t j = 0; j < a.n_; ++j) {
                if (!b(k, j).is_zero()) out(i, j) += a(i, k) * b(k, j);
            }
        }
    return out;
}

std::string PolyMatrix::to_string() const
{
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
            if ((*this)(i, j).is_zero()) continue;
            if (!first) os << " + ";
            os << "(" << (*this)(i, j).to_string() << ")" << elementary_label(n_, i, j);
            first = false;
        }
    return first ? "0" : os.str();
}

PolyMatrix bracket(const PolyMatrix& a, const PolyMatrix& b) { return a * b - b * a; }

PolyMatrix apply_V(const PolyMatrix& m, const CurveParams& params)
{
    PolyMatrix out(m.n());
    for (std::size_t i = 0; i < m.n(); ++i)
        for (std::size_t j = 0; j < m.n(); ++j) out(i, j) = apply_V(m(i, j), params);
    return out;
}

PolyMatrix apply_E(const PolyMatrix& m, const CurveParams& params)
{
    PolyMatrix out(m.n());
    for (std::size_t i = 0; i < m.n(); ++i)
        for (std::size_t j = 0; j < m.n(); ++j) out(i, j) = apply_E(m(i, j), params);
    return out;
}

bool is_nilpotent(const PolyMatrix& m)
{
    if (m.n() == 0) return true;
    PolyMatrix power = m;
    for (std::size_t k = 1; k < m.n(); ++k) power = power * m;
    return power.is_zero();
}

PolyMatrix exp_nilpotent(const PolyMatrix& m)
{
    if (!is_nilpotent(m)) throw std::domain_error("exp_nilpotent: polynomial matrix is not nilpotent");
    PolyMatrix out = PolyMatrix::identity(m.n());
    PolyMatrix term = PolyMatrix::identity(m.n());
    for (std::size_t k = 1; k < m.n(); ++k) {
        term = term * m * Rational(1, static_cast<unsigned long>(k));
        if (term.is_zero()) break;
        out += term;
    }
    return out;
}

}  // namespace logflat
