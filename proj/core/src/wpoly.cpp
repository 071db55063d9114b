#include "logflat/wpoly.hpp"

#include <sstream>
#include <stdexcept>

namespace logflat {

CurveParams::CurveParams(std::int64_t p, std::int64_t q) : p_(p), q_(q), w0_(p * q - p - q)
{
    if (p <= 0 || q <= 0) throw InputError("p and q must be positive");
    if (gcd(p, q) != 1) throw InputError("p,q must be coprime");
    if (p >= q) throw InputError("p must be smaller than q");
}

std::string Monomial::label() const
{
    if (x == 0 && y == 0) return "1";
    std::string out;
    if (x > 0) out += x == 1 ? "x" : "x^" + std::to_string(x);
    if (y > 0) {
        if (!out.empty()) out += "*";
        out += y == 1 ? "y" : "y^" + std::to_string(y);
    }
    return out;
}

WeightedPolynomial WeightedPolynomial::constant(const Rational& c)
{
    return monomial({0, 0}, c);
}

WeightedPolynomial WeightedPolynomial::monomial(Monomial m, const Rational& coef)
{
    WeightedPolynomial out;
    out.add_term(m, coef);
    return out;
}

WeightedPolynomial WeightedPolynomial::f_power(const CurveParams& params, int c)
{
    if (c < 0) throw std::invalid_argument("f_power: negative exponent");
    const auto f = monomial({static_cast<int>(params.p()), 0}) -
                   monomial({0, static_cast<int>(params.q())});
    WeightedPolynomial out = constant(1);
    for (int i = 0; i < c; ++i) out = out * f;
    return out;
}

Rational WeightedPolynomial::coefficient(Monomial m) const
{
    const auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

void WeightedPolynomial::add_term(Monomial m, const Rational& coef)
{
    if (coef == 0) return;
    if (m.x < 0 || m.y < 0) throw std::invalid_argument("negative exponent in polynomial");
    auto [it, inserted] = terms_.try_emplace(m, coef);
    if (inserted) it->second.canonicalize();
    if (!inserted) {
        it->second += coef;
        if (it->second == 0) terms_.erase(it);
    }
}

std::optional<std::int64_t> WeightedPolynomial::weight(const CurveParams& params) const
{
    if (terms_.empty()) return std::nullopt;
    const std::int64_t w = terms_.begin()->first.weight(params);
    for (const auto& [m, c] : terms_) {
        if (m.weight(params) != w) return std::nullopt;
    }
    return w;
}

bool WeightedPolynomial::is_homogeneous(const CurveParams& params) const
{
    return terms_.empty() || weight(params).has_value();
}

WeightedPolynomial WeightedPolynomial::derivative_x() const
{
    WeightedPolynomial out;
    for (const auto& [m, c] : terms_) {
        if (m.x > 0) out.add_term({m.x - 1, m.y}, c * m.x);
    }
    return out;
}

WeightedPolynomial WeightedPolynomial::derivative_y() const
{
    WeightedPolynomial out;
    for (const auto& [m, c] : terms_) {
        if (m.y > 0) out.add_term({m.x, m.y - 1}, c * m.y);
    }
    return out;
}

WeightedPolynomial& WeightedPolynomial::operator+=(const WeightedPolynomial& other)
{
    for (const auto& [m, c] : other.terms_) add_term(m, c);
    return *this;
}

WeightedPolynomial& WeightedPolynomial::operator-=(const WeightedPolynomial& other)
{
    for (const auto& [m, c] : other.terms_) add_term(m, -c);
    return *this;
}

WeightedPolynomial& WeightedPolynomial::operator*=(const Rational& s)
{
    if (s == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
}

WeightedPolynomial operator*(const WeightedPolynomial& a, const WeightedPolynomial& b)
{
    WeightedPolynomial out;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) out.add_term({ma.x + mb.x, ma.y + mb.y}, ca * cb);
    return out;
}

std::string WeightedPolynomial::to_string() const
{
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // Highest x-exponent first reads like the weight bases.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        Rational mag = abs(c);
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        const bool unit = mag == 1;
        if (!unit || (m.x == 0 && m.y == 0)) {
            os << mag.get_str();
            if (!(m.x == 0 && m.y == 0)) os << "*";
        }
        if (!(m.x == 0 && m.y == 0)) os << m.label();
        first = false;
    }
    return os.str();
}

WeightIndex weight_decompose(std::int64_t w, const CurveParams& params)
{
    const std::int64_t p = params.p();
    const std::int64_t q = params.q();
    // a is fixed mod p by w = a q (mod p); then b by w - a q = b p (mod q).
    for (std::int64_t a = 0; a < p; ++a) {
        const std::int64_t rest = w - a * q;
        if (floor_mod(rest, p) != 0 && p > 1) continue;
        for (std::int64_t b = 0; b < q; ++b) {
            const std::int64_t r2 = rest - b * p;
            if (floor_mod(r2, p * q) == 0) return {w, a, b, floor_div(r2, p * q)};
        }
    }
    throw std::logic_error("weight_decompose: no decomposition found");
}

std::vector<Monomial> weight_basis(std::int64_t w, const CurveParams& params)
{
    const WeightIndex idx = weight_decompose(w, params);
    std::vector<Monomial> out;
    for (std::int64_t k = 0; k <= idx.c; ++k) {
        out.push_back({static_cast<int>(idx.a + (idx.c - k) * params.p()),
                       static_cast<int>(idx.b + k * params.q())});
    }
    return out;
}

WeightedPolynomial apply_E(const WeightedPolynomial& g, const CurveParams& params)
{
    WeightedPolynomial out;
    for (const auto& [m, c] : g.terms()) out.add_term(m, c * m.weight(params));
    return out;
}

WeightedPolynomial apply_V(const WeightedPolynomial& g, const CurveParams& params)
{
    const int p = static_cast<int>(params.p());
    const int q = static_cast<int>(params.q());
    const auto vx = WeightedPolynomial::monomial({0, q - 1}, q);
    const auto vy = WeightedPolynomial::monomial({p - 1, 0}, p);
    return vx * g.derivative_x() + vy * g.derivative_y();
}

Vector coordinates(const WeightedPolynomial& g, const std::vector<Monomial>& basis)
{
    Vector out(basis.size());
    std::size_t matched = 0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        out[i] = g.coefficient(basis[i]);
        if (out[i] != 0) ++matched;
    }
    if (matched != g.terms().size()) {
        throw std::invalid_argument("coordinates: polynomial has terms outside the basis: " + g.to_string());
    }
    return out;
}

WeightedPolynomial from_coordinates(const Vector& coords, const std::vector<Monomial>& basis)
{
    if (coords.size() != basis.size()) throw std::invalid_argument("from_coordinates: length mismatch");
    WeightedPolynomial out;
    for (std::size_t i = 0; i < basis.size(); ++i) out.add_term(basis[i], coords[i]);
    return out;
}

Matrix V_matrix(std::int64_t w, const CurveParams& params)
{
    const auto src = weight_basis(w, params);
    const auto dst = weight_basis(w + params.w0(), params);
    Matrix m(dst.size(), src.size());
    for (std::size_t j = 0; j < src.size(); ++j) {
        m.set_column(j, coordinates(apply_V(WeightedPolynomial::monomial(src[j]), params), dst));
    }
    return m;
}

std::vector<WeightedPolynomial> kernel_V(std::int64_t w, const CurveParams& params)
{
    if (w < 0) throw std::invalid_argument("kernel_V: negative weight");
    if (w % params.pq() != 0) return {};
    return {WeightedPolynomial::f_power(params, static_cast<int>(w / params.pq()))};
}

std::vector<WeightedPolynomial> cokernel_V_basis(std::int64_t w, const CurveParams& params)
{
    if (w < 0) throw std::invalid_argument("cokernel_V_basis: negative weight");
    const WeightIndex idx = weight_decompose(w, params);
    if (idx.a > params.p() - 2 || idx.b > params.q() - 2 || idx.c < 0) return {};
    return {WeightedPolynomial::f_power(params, static_cast<int>(idx.c)) *
            WeightedPolynomial::monomial({static_cast<int>(idx.a), static_cast<int>(idx.b)})};
}

Matrix matrix_M(std::int64_t w, const CurveParams& params)
{
    const auto rep = w >= 0 ? cokernel_V_basis(w, params) : std::vector<WeightedPolynomial>{};
    if (rep.empty()) {
        throw std::domain_error("matrix_M: no cokernel representative at weight " + std::to_string(w));
    }
    const auto target = weight_basis(w, params);
    const Matrix v = V_matrix(w - params.w0(), params);
    Matrix m(target.size(), 1 + v.cols());
    m.set_column(0, coordinates(rep.front(), target));
    for (std::size_t c = 0; c < v.cols(); ++c) m.set_column(c + 1, v.column(c));
    return m;
}

Rational matrix_M_determinant(std::int64_t w, const CurveParams& params)
{
    return determinant(matrix_M(w, params));
}

}  // namespace logflat
