#include "logflat/manin.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>

namespace logflat {

Rational intersection_form(int a, int b, int a2, int b2, const CurveParams& params)
{
    const auto p = params.p(), q = params.q();
    auto in_range = [&](int x, int y) { return x >= 0 && x <= p - 2 && y >= 0 && y <= q - 2; };
    if (!in_range(a, b) || !in_range(a2, b2))
        throw std::invalid_argument("intersection_form: exponents outside the Jacobi quotient");
    if (a + a2 + 2 != p || b + b2 + 2 != q) return 0;
    const std::int64_t den = a * q + b * p - params.w0();
    if (den == 0) throw std::logic_error("intersection_form: vanishing denominator");
    Rational r(1, 1);
    r /= Rational(den);
    return r;
}

JacobiQuotient jacobi_quotient(const CurveParams& params)
{
    JacobiQuotient jq;
    for (int a = 0; a <= params.p() - 2; ++a)
        for (int b = 0; b <= params.q() - 2; ++b) jq.basis.push_back({a, b});
    const std::size_t d = jq.basis.size();
    jq.I = Matrix(d, d);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
            jq.I(r, c) = intersection_form(static_cast<int>(jq.basis[r].x), static_cast<int>(jq.basis[r].y),
                                           static_cast<int>(jq.basis[c].x), static_cast<int>(jq.basis[c].y), params);
    return jq;
}

std::string LoopTerm::label(std::size_t n) const
{
    std::string out;
    const Monomial m{a, b};
    if (m != Monomial{0, 0}) out += m.label() + "*";
    if (c == 1) out += "f*";
    else if (c != 0) out += "f^" + std::to_string(c) + "*";
    return out + elementary_label(n, i, j);
}

namespace {

void add_to(LoopVector& v, const LoopTerm& t, const Rational& c)
{
    if (c == 0) return;
    auto [it, inserted] = v.try_emplace(t, c);
    if (!inserted) it->second += c;
    if (it->second == 0) v.erase(it);
}

/// [f^c1 x^a1 y^b1 E_ij, f^c2 x^a2 y^b2 E_kl] = f^(c1+c2) x^(a1+a2) y^(b1+b2) (d_jk E_il - d_li E_kj).
LoopVector bracket_terms(const LoopTerm& s, const LoopTerm& t)
{
    LoopVector out;
    const int c = s.c + t.c, a = s.a + t.a, b = s.b + t.b;
    if (s.j == t.i) add_to(out, {c, a, b, s.i, t.j}, 1);
    if (t.j == s.i) add_to(out, {c, a, b, t.i, s.j}, -1);
    return out;
}

LoopVector bracket_loop(const LoopVector& x, const LoopVector& y)
{
    LoopVector out;
    for (const auto& [s, cs] : x)
        for (const auto& [t, ct] : y)
            for (const auto& [u, cu] : bracket_terms(s, t)) add_to(out, u, cs * ct * cu);
    return out;
}

LoopVector single(const LoopTerm& t) { return {{t, Rational(1)}}; }

LoopVector keep(const LoopVector& v, const std::function<bool(const LoopTerm&)>& pred)
{
    LoopVector out;
    for (const auto& [t, c] : v)
        if (pred(t)) out.emplace(t, c);
    return out;
}

LoopVector sum(LoopVector a, const LoopVector& b, const Rational& s = 1)
{
    for (const auto& [t, c] : b) add_to(a, t, s * c);
    return a;
}

/// k(E_ij, E_kl) = tr(E_ij E_kl).
Rational trace_pair(const LoopTerm& s, const LoopTerm& t)
{
    return (s.j == t.i && t.j == s.i) ? Rational(1) : Rational(0);
}

void add_sparse(GradedAlgebra::Sparse& v, std::size_t k, const Rational& c)
{
    if (c == 0) return;
    for (auto& [idx, val] : v) {
        if (idx == k) {
            val += c;
            return;
        }
    }
    v.emplace_back(k, c);
}

void prune(GradedAlgebra::Sparse& v)
{
    v.erase(std::remove_if(v.begin(), v.end(), [](const auto& e) { return e.second == 0; }), v.end());
}

bool sign_odd(int a, int b) { return ((a * b) % 2 + 2) % 2 == 1; }

Vector unit(std::size_t dim, std::size_t k)
{
    Vector v(dim);
    v[k] = 1;
    return v;
}

}  // namespace

TripleBases build_triple(const SemisimpleData& s, const CurveParams& params)
{
    TripleBases tb;
    const std::size_t n = s.n();
    const std::int64_t pq = params.pq(), p = params.p(), q = params.q(), w0 = params.w0();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const Rational lambda = s.ad_eigenvalue(i, j);
            // lambda = -c pq
            const Rational c = -lambda / Rational(pq);
            if (is_integer(c)) tb.c.push_back({static_cast<int>(to_int64(c)), 0, 0, i, j});
            for (int a = 0; a <= p - 2; ++a) {
                for (int b = 0; b <= q - 2; ++b) {
                    const Rational ck = (Rational(w0 - a * q - b * p) - lambda) / Rational(pq);
                    if (is_integer(ck)) tb.K.push_back({static_cast<int>(to_int64(ck)), a, b, i, j});
                }
            }
        }
    }
    std::sort(tb.c.begin(), tb.c.end());
    std::sort(tb.K.begin(), tb.K.end());
    for (const auto& t : tb.c) {
        if (t.c >= 0) tb.b.push_back(t);
        if (t.c <= 0) tb.b_minus.push_back(t);
    }
    for (const auto& t : tb.K) {
        if (t.c > 0) tb.n_plus.push_back(t);
        else if (t.c == 0) tb.h_part.push_back(t);
        else tb.n_minus.push_back(t);
    }
    return tb;
}

Vector GradedAlgebra::bracket(const Vector& x, const Vector& y) const
{
    Vector out(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < dim(); ++j) {
            if (y[j] == 0) continue;
            for (const auto& [k, c] : table[i][j]) out[k] += x[i] * y[j] * c;
        }
    }
    return out;
}

Rational GradedAlgebra::pairing(const Vector& x, const Vector& y) const
{
    Rational r = 0;
    for (std::size_t i = 0; i < dim(); ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < dim(); ++j)
            if (y[j] != 0 && form(i, j) != 0) r += x[i] * form(i, j) * y[j];
    }
    return r;
}

ManinTriple::ManinTriple(const CurveParams& params, const SemisimpleData& s, OmegaReading reading)
    : params_(params), s_(s), reading_(reading), bases_(build_triple(s, params))
{
    const std::size_t n = s.n();
    auto push = [&](Summand sm, const LoopTerm& t, int degree, const std::string& suffix) {
        index_.emplace(std::pair{sm, t}, basis_.size());
        basis_.push_back({sm, t, degree, t.label(n) + suffix});
    };
    for (const auto& t : bases_.b) push(Summand::B, t, 0, "");
    for (const auto& t : bases_.K) push(Summand::K, t, 1, " [K]");
    for (const auto& t : bases_.h_part) push(Summand::H, t, 1, " [h]");
    for (const auto& t : bases_.b_minus) push(Summand::BMinus, t, 2, " [b-]");

    const std::size_t d = basis_.size();
    L_.degree.resize(d);
    for (std::size_t k = 0; k < d; ++k) L_.degree[k] = basis_[k].degree;
    L_.table.assign(d, std::vector<GradedAlgebra::Sparse>(d));
    L_.form = Matrix(d, d);

    auto as_sparse = [&](const LoopVector& v, Summand sm) {
        GradedAlgebra::Sparse out;
        for (const auto& [t, c] : v) {
            const long k = index_of(sm, t);
            if (k < 0) throw std::logic_error("manin: bracket left the summand " + t.label(n));
            add_sparse(out, static_cast<std::size_t>(k), c);
        }
        prune(out);
        return out;
    };
    auto in_b_minus = [](const LoopTerm& t) { return t.c <= 0; };
    auto in_b = [](const LoopTerm& t) { return t.c >= 0; };
    auto in_h = [](const LoopTerm& t) { return t.c == 0; };

    for (std::size_t x = 0; x < d; ++x) {
        for (std::size_t y = 0; y < d; ++y) {
            const auto& ex = basis_[x];
            const auto& ey = basis_[y];
            const Summand sx = ex.summand, sy = ey.summand;
            GradedAlgebra::Sparse r;
            if (sx == Summand::B && sy == Summand::B) {
                r = as_sparse(keep(bracket_terms(ex.term, ey.term), in_b), Summand::B);
            } else if (sx == Summand::B && sy == Summand::K) {
                r = as_sparse(bracket_terms(ex.term, ey.term), Summand::K);
            } else if (sx == Summand::K && sy == Summand::B) {
                r = as_sparse(sum({}, bracket_terms(ey.term, ex.term), -1), Summand::K);
            } else if (sx == Summand::B && sy == Summand::H) {
                r = as_sparse(keep(bracket_terms(ex.term, ey.term), in_h), Summand::H);
            } else if (sx == Summand::H && sy == Summand::B) {
                r = as_sparse(keep(sum({}, bracket_terms(ey.term, ex.term), -1), in_h), Summand::H);
            } else if (sx == Summand::B && sy == Summand::BMinus) {
                r = as_sparse(keep(bracket_terms(ex.term, ey.term), in_b_minus), Summand::BMinus);
            } else if (sx == Summand::BMinus && sy == Summand::B) {
                r = as_sparse(keep(sum({}, bracket_terms(ey.term, ex.term), -1), in_b_minus), Summand::BMinus);
            } else if (sx == Summand::K && sy == Summand::K) {
                r = as_sparse(mu(ex.term, ey.term), Summand::BMinus);
            } else if (sx == Summand::H && sy == Summand::H) {
                r = as_sparse(sum({}, nu(ex.term, ey.term), -1), Summand::BMinus);
            }
            L_.table[x][y] = std::move(r);

            Rational f = 0;
            if (sx == Summand::B && sy == Summand::BMinus) f = trace_pair(ex.term, ey.term);
            else if (sx == Summand::BMinus && sy == Summand::B) f = trace_pair(ex.term, ey.term);
            else if (sx == Summand::K && sy == Summand::K) f = Omega(ex.term, ey.term);
            else if (sx == Summand::H && sy == Summand::H) f = -Omega(ex.term, ey.term);
            L_.form(x, y) = f;
        }
    }

    // C[eps] (x) L: [eps^s y, eps^t z] = (-1)^(|y| t) eps^(s+t) [y, z] and
    // B(eps^s y, eps^t z) = (-1)^(|y| t) tr(eps^(s+t)) B(y, z).
    ext_.degree.resize(2 * d);
    for (std::size_t k = 0; k < d; ++k) {
        ext_.degree[k] = L_.degree[k];
        ext_.degree[d + k] = L_.degree[k] + 1;
    }
    ext_.table.assign(2 * d, std::vector<GradedAlgebra::Sparse>(2 * d));
    ext_.form = Matrix(2 * d, 2 * d);
    for (std::size_t x = 0; x < 2 * d; ++x) {
        for (std::size_t y = 0; y < 2 * d; ++y) {
            const std::size_t s = x / d, t = y / d;
            const std::size_t bx = x % d, by = y % d;
            if (s + t > 1) continue;
            const Rational sign = (t == 1 && sign_odd(L_.degree[bx], 1)) ? Rational(-1) : Rational(1);
            for (const auto& [k, c] : L_.table[bx][by]) ext_.table[x][y].emplace_back((s + t) * d + k, sign * c);
            if (s + t == 1) ext_.form(x, y) = sign * L_.form(bx, by);
        }
    }
}

long ManinTriple::index_of(Summand s, const LoopTerm& t) const
{
    auto it = index_.find({s, t});
    return it == index_.end() ? -1 : static_cast<long>(it->second);
}

LoopVector ManinTriple::omega(const LoopTerm& k1, const LoopTerm& k2) const
{
    const Rational i = intersection_form(k1.a, k1.b, k2.a, k2.b, params_);
    if (i == 0) return {};
    LoopTerm x1 = k1, x2 = k2;
    x1.a = x1.b = x2.a = x2.b = 0;
    LoopVector out;
    for (const auto& [t, c] : bracket_terms(x1, x2)) add_to(out, t, i * c);
    return out;
}

LoopVector ManinTriple::mu(const LoopTerm& k1, const LoopTerm& k2) const
{
    return keep(omega(k1, k2), [](const LoopTerm& t) { return t.c <= 0; });
}

LoopVector ManinTriple::nu(const LoopTerm& h1, const LoopTerm& h2) const
{
    if (h1.c != 0 || h2.c != 0) throw std::invalid_argument("nu: arguments must lie in hPart");
    return mu(h1, h2);
}

Rational ManinTriple::Omega(const LoopTerm& k1, const LoopTerm& k2) const
{
    if (reading_ == OmegaReading::ConstantTerm && k1.c + k2.c != 0) return 0;
    return intersection_form(k1.a, k1.b, k2.a, k2.b, params_) * trace_pair(k1, k2);
}

Vector ManinTriple::loop_to_summand(const LoopVector& v, Summand s) const
{
    Vector out(dim());
    for (const auto& [t, c] : v) {
        const long k = index_of(s, t);
        if (k < 0) throw std::logic_error("manin: term outside the summand");
        out[static_cast<std::size_t>(k)] += c;
    }
    return out;
}

Matrix ManinTriple::plus_embedding() const
{
    std::vector<Vector> cols;
    for (const auto& t : bases_.b) cols.push_back(loop_to_summand(single(t), Summand::B));
    for (const auto& t : bases_.n_plus) cols.push_back(loop_to_summand(single(t), Summand::K));
    for (const auto& t : bases_.h_part) {
        Vector v = loop_to_summand(single(t), Summand::K);
        v[static_cast<std::size_t>(index_of(Summand::H, t))] = 1;
        cols.push_back(v);
    }
    return Matrix::from_columns(dim(), cols);
}

Matrix ManinTriple::minus_embedding() const
{
    std::vector<Vector> cols;
    for (const auto& t : bases_.n_minus) cols.push_back(loop_to_summand(single(t), Summand::K));
    for (const auto& t : bases_.h_part) {
        Vector v = loop_to_summand(single(t), Summand::K);
        v[static_cast<std::size_t>(index_of(Summand::H, t))] = -1;
        cols.push_back(v);
    }
    for (const auto& t : bases_.b_minus) cols.push_back(loop_to_summand(single(t), Summand::BMinus));
    return Matrix::from_columns(dim(), cols);
}

bool ManinReport::all_pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const ManinCheck& c) { return c.pass; });
}

namespace {

using Labeler = std::function<std::string(std::size_t)>;

ManinCheck make_check(std::string name, std::optional<std::string> witness)
{
    return {std::move(name), !witness.has_value(), witness.value_or("")};
}

std::string tuple_label(const Labeler& lab, std::initializer_list<std::size_t> idx)
{
    std::string out = "(";
    bool first = true;
    for (auto k : idx) {
        if (!first) out += ", ";
        first = false;
        out += lab(k);
    }
    return out + ")";
}

Vector basis_bracket(const GradedAlgebra& g, std::size_t i, std::size_t j)
{
    Vector v(g.dim());
    for (const auto& [k, c] : g.table[i][j]) v[k] += c;
    return v;
}

Vector bracket_with_vector(const GradedAlgebra& g, std::size_t i, const Vector& y)
{
    Vector v(g.dim());
    for (std::size_t j = 0; j < g.dim(); ++j) {
        if (y[j] == 0) continue;
        for (const auto& [k, c] : g.table[i][j]) v[k] += y[j] * c;
    }
    return v;
}

Vector bracket_vector_with(const GradedAlgebra& g, const Vector& x, std::size_t j)
{
    Vector v(g.dim());
    for (std::size_t i = 0; i < g.dim(); ++i) {
        if (x[i] == 0) continue;
        for (const auto& [k, c] : g.table[i][j]) v[k] += x[i] * c;
    }
    return v;
}

std::optional<std::string> check_antisymmetry(const GradedAlgebra& g, const Labeler& lab)
{
    for (std::size_t i = 0; i < g.dim(); ++i)
        for (std::size_t j = 0; j < g.dim(); ++j) {
            Vector a = basis_bracket(g, i, j), b = basis_bracket(g, j, i);
            const Rational s = sign_odd(g.degree[i], g.degree[j]) ? 1 : -1;
            for (std::size_t k = 0; k < g.dim(); ++k)
                if (a[k] != s * b[k]) return tuple_label(lab, {i, j});
        }
    return std::nullopt;
}

std::optional<std::string> check_bracket_degrees(const GradedAlgebra& g, const Labeler& lab)
{
    for (std::size_t i = 0; i < g.dim(); ++i)
        for (std::size_t j = 0; j < g.dim(); ++j)
            for (const auto& [k, c] : g.table[i][j])
                if (g.degree[k] != g.degree[i] + g.degree[j]) return tuple_label(lab, {i, j});
    return std::nullopt;
}

/// [x,[y,z]] = [[x,y],z] + (-1)^(|x||y|) [y,[x,z]].
std::optional<std::string> check_jacobi(const GradedAlgebra& g, const Labeler& lab)
{
    const std::size_t d = g.dim();
    for (std::size_t x = 0; x < d; ++x)
        for (std::size_t y = 0; y < d; ++y) {
            const Vector xy = basis_bracket(g, x, y);
            for (std::size_t z = 0; z < d; ++z) {
                const Vector lhs = bracket_with_vector(g, x, basis_bracket(g, y, z));
                Vector rhs = bracket_vector_with(g, xy, z);
                const Vector t = bracket_with_vector(g, y, basis_bracket(g, x, z));
                const Rational s = sign_odd(g.degree[x], g.degree[y]) ? -1 : 1;
                for (std::size_t k = 0; k < d; ++k) rhs[k] += s * t[k];
                if (lhs != rhs) return tuple_label(lab, {x, y, z});
            }
        }
    return std::nullopt;
}

std::optional<std::string> check_form_symmetry(const GradedAlgebra& g, const Labeler& lab)
{
    for (std::size_t i = 0; i < g.dim(); ++i)
        for (std::size_t j = 0; j < g.dim(); ++j) {
            const Rational s = sign_odd(g.degree[i], g.degree[j]) ? -1 : 1;
            if (g.form(i, j) != s * g.form(j, i)) return tuple_label(lab, {i, j});
        }
    return std::nullopt;
}

std::optional<std::string> check_form_degree(const GradedAlgebra& g, int degree, const Labeler& lab)
{
    for (std::size_t i = 0; i < g.dim(); ++i)
        for (std::size_t j = 0; j < g.dim(); ++j)
            if (g.form(i, j) != 0 && g.degree[i] + g.degree[j] != degree) return tuple_label(lab, {i, j});
    return std::nullopt;
}

/// B([x,y],z) + (-1)^(|x||y|) B(y,[x,z]) = 0.
std::optional<std::string> check_invariance(const GradedAlgebra& g, const Labeler& lab)
{
    const std::size_t d = g.dim();
    for (std::size_t x = 0; x < d; ++x)
        for (std::size_t y = 0; y < d; ++y) {
            const Vector xy = basis_bracket(g, x, y);
            for (std::size_t z = 0; z < d; ++z) {
                const Vector xz = basis_bracket(g, x, z);
                const Rational s = sign_odd(g.degree[x], g.degree[y]) ? -1 : 1;
                if (g.pairing(xy, unit(d, z)) + s * g.pairing(unit(d, y), xz) != 0) return tuple_label(lab, {x, y, z});
            }
        }
    return std::nullopt;
}

std::optional<std::string> check_nondegenerate(const Matrix& m)
{
    if (rank(m) == m.rows() && m.rows() == m.cols()) return std::nullopt;
    return "rank " + std::to_string(rank(m)) + " of " + std::to_string(m.rows());
}

bool in_span(const Matrix& span, std::size_t span_rank, const Vector& v)
{
    return rank(hstack(span, Matrix::from_columns(span.rows(), {v}))) == span_rank;
}

std::optional<std::string> check_closed(const GradedAlgebra& g, const Matrix& sub)
{
    const std::size_t r = rank(sub);
    for (std::size_t a = 0; a < sub.cols(); ++a)
        for (std::size_t b = 0; b < sub.cols(); ++b) {
            const Vector v = g.bracket(sub.column(a), sub.column(b));
            if (!is_zero(v) && !in_span(sub, r, v))
                return "columns (" + std::to_string(a) + ", " + std::to_string(b) + ")";
        }
    return std::nullopt;
}

std::optional<std::string> check_isotropic(const GradedAlgebra& g, const Matrix& sub)
{
    const Matrix m = sub.transpose() * g.form * sub;
    for (std::size_t a = 0; a < m.rows(); ++a)
        for (std::size_t b = 0; b < m.cols(); ++b)
            if (m(a, b) != 0) return "columns (" + std::to_string(a) + ", " + std::to_string(b) + ")";
    return std::nullopt;
}

Matrix unit_columns(std::size_t dim, const std::vector<std::size_t>& idx)
{
    std::vector<Vector> cols;
    for (auto k : idx) cols.push_back(unit(dim, k));
    return Matrix::from_columns(dim, cols);
}

/// Columns of a (dim x k) matrix placed at offset inside a (2 dim) space.
Matrix shifted(const Matrix& m, std::size_t offset, std::size_t total)
{
    Matrix out(total, m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(offset + r, c) = m(r, c);
    return out;
}

}  // namespace

ManinReport verify_manin(const SemisimpleData& s, const CurveParams& params, OmegaReading reading)
{
    ManinReport rep;
    const std::size_t n = s.n();

    // Intersection form.
    const JacobiQuotient jq = jacobi_quotient(params);
    rep.jacobi_dim = jq.basis.size();
    rep.checks.push_back(make_check(
        "Jacobi quotient has dimension (p-1)(q-1)",
        rep.jacobi_dim == static_cast<std::size_t>((params.p() - 1) * (params.q() - 1))
            ? std::nullopt
            : std::optional<std::string>("dimension " + std::to_string(rep.jacobi_dim))));
    {
        std::optional<std::string> w;
        for (std::size_t r = 0; r < jq.basis.size() && !w; ++r)
            for (std::size_t c = 0; c < jq.basis.size() && !w; ++c)
                if (jq.I(r, c) != -jq.I(c, r)) w = jq.basis[r].label() + ", " + jq.basis[c].label();
        rep.checks.push_back(make_check("intersection form is antisymmetric", w));
    }
    rep.checks.push_back(make_check("intersection form is nondegenerate", check_nondegenerate(jq.I)));
    {
        std::optional<std::string> w;
        for (const auto& m : jq.basis)
            if (m.x * params.q() + m.y * params.p() == params.w0()) w = m.label();
        rep.checks.push_back(make_check("intersection denominators are nonzero", w));
    }

    const ManinTriple mt(params, s, reading);
    const auto& tb = mt.bases();
    rep.dim_L = mt.dim();
    rep.dim_K = tb.K.size();
    rep.dim_b = tb.b.size();
    rep.dim_h = tb.h_part.size();
    const Labeler lab = [&](std::size_t k) { return mt.basis()[k].label; };
    const std::size_t d = mt.dim();
    const Labeler ext_lab = [&](std::size_t k) { return (k >= d ? "eps " : "") + mt.basis()[k % d].label; };

    // omega and mu.
    {
        std::optional<std::string> sym, eq_c, eq_b, nu_ok;
        for (const auto& k1 : tb.K)
            for (const auto& k2 : tb.K) {
                if (!sym && mt.omega(k1, k2) != mt.omega(k2, k1)) sym = k1.label(n) + ", " + k2.label(n);
                for (const auto& z : tb.c) {
                    LoopVector lhs;
                    for (const auto& [t, c] : bracket_terms(z, k1))
                        for (const auto& [u, cu] : mt.omega(t, k2)) add_to(lhs, u, c * cu);
                    for (const auto& [t, c] : bracket_terms(z, k2))
                        for (const auto& [u, cu] : mt.omega(k1, t)) add_to(lhs, u, c * cu);
                    const LoopVector rhs = bracket_loop(single(z), mt.omega(k1, k2));
                    if (!eq_c && lhs != rhs) eq_c = z.label(n) + ", " + k1.label(n) + ", " + k2.label(n);
                    if (z.c >= 0) {
                        LoopVector lm;
                        for (const auto& [t, c] : bracket_terms(z, k1))
                            for (const auto& [u, cu] : mt.mu(t, k2)) add_to(lm, u, c * cu);
                        for (const auto& [t, c] : bracket_terms(z, k2))
                            for (const auto& [u, cu] : mt.mu(k1, t)) add_to(lm, u, c * cu);
                        const LoopVector rm = keep(bracket_loop(single(z), mt.mu(k1, k2)),
                                                   [](const LoopTerm& t) { return t.c <= 0; });
                        if (!eq_b && lm != rm) eq_b = z.label(n) + ", " + k1.label(n) + ", " + k2.label(n);
                    }
                }
                if (!nu_ok && k1.c > 0 && k2.c >= 0 && !mt.mu(k1, k2).empty()) nu_ok = k1.label(n) + ", " + k2.label(n);
            }
        rep.checks.push_back(make_check("omega is symmetric", sym));
        rep.checks.push_back(make_check("omega is c-equivariant", eq_c));
        rep.checks.push_back(make_check("mu is b-equivariant", eq_b));
        rep.checks.push_back(make_check("mu vanishes on n_+ against n_+ + hPart, so nu is well defined", nu_ok));
    }

    // Omega.
    {
        std::vector<std::size_t> kidx;
        for (std::size_t k = 0; k < d; ++k)
            if (mt.basis()[k].summand == Summand::K) kidx.push_back(k);
        Matrix om(kidx.size(), kidx.size());
        for (std::size_t r = 0; r < kidx.size(); ++r)
            for (std::size_t c = 0; c < kidx.size(); ++c) om(r, c) = mt.L().form(kidx[r], kidx[c]);
        rep.checks.push_back(make_check("Omega is nondegenerate on K", check_nondegenerate(om)));
        Matrix oh(tb.h_part.size(), tb.h_part.size());
        for (std::size_t r = 0; r < tb.h_part.size(); ++r)
            for (std::size_t c = 0; c < tb.h_part.size(); ++c) oh(r, c) = mt.Omega(tb.h_part[r], tb.h_part[c]);
        rep.checks.push_back(make_check("Omega is nondegenerate on hPart", check_nondegenerate(oh)));
        Matrix opm(tb.n_plus.size(), tb.n_minus.size());
        for (std::size_t r = 0; r < tb.n_plus.size(); ++r)
            for (std::size_t c = 0; c < tb.n_minus.size(); ++c) opm(r, c) = mt.Omega(tb.n_plus[r], tb.n_minus[c]);
        rep.checks.push_back(make_check("Omega pairs n_+ perfectly with n_-", check_nondegenerate(opm)));
        const ManinTriple other(params, s,
                                reading == OmegaReading::ConstantTerm ? OmegaReading::EvaluateAtOne
                                                                      : OmegaReading::ConstantTerm);
        rep.checks.push_back(make_check("both readings of Omega give the same pairing",
                                        other.L().form == mt.L().form ? std::nullopt
                                                                      : std::optional<std::string>("forms differ")));
    }

    // L.
    const GradedAlgebra& L = mt.L();
    rep.checks.push_back(make_check("L bracket respects the grading", check_bracket_degrees(L, lab)));
    rep.checks.push_back(make_check("L bracket is graded antisymmetric", check_antisymmetry(L, lab)));
    rep.checks.push_back(make_check("L satisfies the graded Jacobi identity", check_jacobi(L, lab)));
    rep.checks.push_back(make_check("B has degree -2", check_form_degree(L, 2, lab)));
    rep.checks.push_back(make_check("B is graded symmetric", check_form_symmetry(L, lab)));
    rep.checks.push_back(make_check("B is nondegenerate", check_nondegenerate(L.form)));
    rep.checks.push_back(make_check("B is invariant", check_invariance(L, lab)));

    const Matrix pp = mt.plus_embedding();
    const Matrix pm = mt.minus_embedding();
    rep.checks.push_back(make_check("p_+ is a subalgebra", check_closed(L, pp)));
    rep.checks.push_back(make_check("p_- is a subalgebra", check_closed(L, pm)));
    rep.checks.push_back(make_check("p_+ is isotropic", check_isotropic(L, pp)));
    rep.checks.push_back(make_check("p_- is isotropic", check_isotropic(L, pm)));
    {
        const bool ok = rank(pp) == pp.cols() && rank(pm) == pm.cols() && pp.cols() + pm.cols() == d &&
                        rank(hstack(pp, pm)) == d && 2 * pp.cols() == d;
        rep.checks.push_back(make_check("p_+ and p_- are complementary Lagrangians",
                                        ok ? std::nullopt
                                           : std::optional<std::string>("dims " + std::to_string(pp.cols()) + " + " +
                                                                        std::to_string(pm.cols()) + " of " +
                                                                        std::to_string(d))));
    }

    // p_+ against the bracket of H(U_0): b acts on n_+ + hPart by multiplying
    // loop terms and H^1 against H^1 vanishes.
    {
        std::optional<std::string> w;
        const std::size_t nb = tb.b.size();
        std::vector<LoopTerm> h1 = tb.n_plus;
        h1.insert(h1.end(), tb.h_part.begin(), tb.h_part.end());
        auto coords = [&](const LoopVector& v, const std::vector<LoopTerm>& basis, std::size_t offset, Vector& out) {
            for (const auto& [t, c] : v) {
                auto it = std::find(basis.begin(), basis.end(), t);
                if (it == basis.end()) return false;
                out[offset + static_cast<std::size_t>(it - basis.begin())] += c;
            }
            return true;
        };
        const std::size_t np = pp.cols();
        for (std::size_t x = 0; x < np && !w; ++x)
            for (std::size_t y = 0; y < np && !w; ++y) {
                Vector expect(np);
                bool ok = true;
                if (x < nb && y < nb) {
                    ok = coords(bracket_terms(tb.b[x], tb.b[y]), tb.b, 0, expect);
                } else if (x < nb) {
                    ok = coords(bracket_terms(tb.b[x], h1[y - nb]), h1, nb, expect);
                } else if (y < nb) {
                    ok = coords(sum({}, bracket_terms(tb.b[y], h1[x - nb]), -1), h1, nb, expect);
                }
                const Vector got = L.bracket(pp.column(x), pp.column(y));
                if (!ok || got != pp * expect) w = "columns (" + std::to_string(x) + ", " + std::to_string(y) + ")";
            }
        rep.checks.push_back(make_check("p_+ is isomorphic to H(U_0) as a graded Lie algebra", w));
    }

    // Extension by C[eps].
    const GradedAlgebra& E = mt.extended();
    rep.checks.push_back(make_check("eps-extension bracket respects the grading", check_bracket_degrees(E, ext_lab)));
    rep.checks.push_back(make_check("eps-extension bracket is graded antisymmetric", check_antisymmetry(E, ext_lab)));
    rep.checks.push_back(make_check("eps-extension satisfies the graded Jacobi identity", check_jacobi(E, ext_lab)));
    rep.checks.push_back(make_check("eps-extension pairing has degree -3", check_form_degree(E, 3, ext_lab)));
    rep.checks.push_back(make_check("eps-extension pairing is graded symmetric", check_form_symmetry(E, ext_lab)));
    rep.checks.push_back(make_check("eps-extension pairing is nondegenerate", check_nondegenerate(E.form)));
    rep.checks.push_back(make_check("eps-extension pairing is invariant", check_invariance(E, ext_lab)));
    {
        const Matrix epp = hstack(shifted(pp, 0, 2 * d), shifted(pp, d, 2 * d));
        const Matrix epm = hstack(shifted(pm, 0, 2 * d), shifted(pm, d, 2 * d));
        std::optional<std::string> w = check_closed(E, epp);
        if (!w) w = check_closed(E, epm);
        if (!w) w = check_isotropic(E, epp);
        if (!w) w = check_isotropic(E, epm);
        if (!w && rank(hstack(epp, epm)) != 2 * d) w = "not complementary";
        rep.checks.push_back(make_check("C[eps] p_+ and C[eps] p_- are complementary Lagrangian subalgebras", w));
    }

    // The tangent subalgebra b + (n_+ + hPart) + b_{>0} eps + (n_+ + hPart) eps
    // and M = tangent + C[eps] p_-.
    {
        const std::size_t nb = tb.b.size();
        std::vector<Vector> tcols;
        for (std::size_t c = 0; c < pp.cols(); ++c) tcols.push_back(shifted(pp, 0, 2 * d).column(c));
        for (std::size_t c = 0; c < pp.cols(); ++c) {
            if (c < nb && tb.b[c].c <= 0) continue;
            tcols.push_back(shifted(pp, d, 2 * d).column(c));
        }
        const Matrix T = Matrix::from_columns(2 * d, tcols);
        rep.checks.push_back(make_check("the tangent subalgebra is closed under the bracket", check_closed(E, T)));

        const Matrix M = hstack(T, hstack(shifted(pm, 0, 2 * d), shifted(pm, d, 2 * d)));
        rep.checks.push_back(make_check("M is a subalgebra", check_closed(E, M)));
        const auto perp_vecs = nullspace(M.transpose() * E.form);
        const Matrix perp = Matrix::from_columns(2 * d, perp_vecs);
        std::vector<std::size_t> g0;
        for (std::size_t k = 0; k < d; ++k)
            if (mt.basis()[k].summand == Summand::BMinus && mt.basis()[k].term.c == 0) g0.push_back(k);
        const Matrix g0m = unit_columns(2 * d, g0);
        const std::size_t rp = rank(perp);
        const bool same = rp == g0.size() && rank(hstack(perp, g0m)) == rp;
        rep.checks.push_back(make_check("M^perp is the copy of g_0 inside b^-",
                                        same ? std::nullopt
                                             : std::optional<std::string>("dim M^perp = " + std::to_string(rp))));
        const std::size_t rm = rank(M);
        std::optional<std::string> co;
        for (std::size_t c = 0; c < perp.cols() && !co; ++c)
            if (!in_span(M, rm, perp.column(c))) co = "perp column " + std::to_string(c);
        rep.checks.push_back(make_check("M is coisotropic", co));
        rep.checks.push_back(make_check("M^perp is isotropic", check_isotropic(E, perp)));
        std::optional<std::string> ideal;
        for (std::size_t a = 0; a < M.cols() && !ideal; ++a)
            for (std::size_t b = 0; b < perp.cols() && !ideal; ++b) {
                const Vector v = E.bracket(M.column(a), perp.column(b));
                if (!is_zero(v) && !in_span(perp, rp, v)) ideal = "columns (" + std::to_string(a) + ", " + std::to_string(b) + ")";
            }
        rep.checks.push_back(make_check("M^perp is an ideal of M", ideal));
    }
    return rep;
}

}  // namespace logflat
