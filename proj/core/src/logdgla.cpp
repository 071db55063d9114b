#include "logflat/logdgla.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

namespace logflat {

namespace {

struct Wedge {
    int sign = 0;  // 0 when the product vanishes
    Form form = Form::One;
};

Wedge wedge(Form a, Form b)
{
    if (a == Form::One) return {1, b};
    if (b == Form::One) return {1, a};
    if (a == Form::Alpha0 && b == Form::Beta) return {1, Form::Alpha0Beta};
    if (a == Form::Beta && b == Form::Alpha0) return {-1, Form::Alpha0Beta};
    return {0, Form::One};
}

Monomial times(Monomial a, Monomial b) { return {a.x + b.x, a.y + b.y}; }

void add_poly(DglaElement& out, const WeightedPolynomial& g, std::size_t i, std::size_t j, Form f, const Rational& s)
{
    for (const auto& [m, c] : g.terms()) out.add(Term{m, i, j, f}, s * c);
}

WeightedPolynomial V_of(Monomial m, const CurveParams& params)
{
    return apply_V(WeightedPolynomial::monomial(m), params);
}

template <class TermOp>
DglaElement map_terms(const DglaElement& x, int out_degree, TermOp&& op)
{
    DglaElement out(out_degree);
    for (const auto& [t, c] : x.terms()) op(out, t, c);
    return out;
}

}  // namespace

int form_degree(Form f)
{
    switch (f) {
    case Form::One: return 0;
    case Form::Alpha0:
    case Form::Beta: return 1;
    case Form::Alpha0Beta: return 2;
    }
    return 0;
}

std::int64_t form_weight_shift(Form f, const CurveParams& params)
{
    return (f == Form::Beta || f == Form::Alpha0Beta) ? -params.w0() : 0;
}

std::string form_label(Form f)
{
    switch (f) {
    case Form::One: return "";
    case Form::Alpha0: return "alpha0";
    case Form::Beta: return "beta";
    case Form::Alpha0Beta: return "alpha0^beta";
    }
    return "";
}

std::string term_label(const Term& t, std::size_t n)
{
    std::string out;
    if (t.mono != Monomial{0, 0}) out = t.mono.label() + "*";
    out += elementary_label(n, t.i, t.j);
    if (t.form != Form::One) out += "*" + form_label(t.form);
    return out;
}

Rational eigenvalue(const Term& t, const DglaContext& ctx)
{
    return Rational(t.mono.weight(ctx.params) + form_weight_shift(t.form, ctx.params)) + ctx.s.ad_eigenvalue(t.i, t.j);
}

DglaElement::DglaElement(int degree) : degree_(degree) {}

Rational DglaElement::coefficient(const Term& t) const
{
    auto it = terms_.find(t);
    return it == terms_.end() ? Rational(0) : it->second;
}

void DglaElement::add(const Term& t, const Rational& coef)
{
    if (form_degree(t.form) != degree_) throw std::invalid_argument("DglaElement::add: term of the wrong degree");
    if (coef == 0) return;
    auto [it, inserted] = terms_.try_emplace(t, coef);
    if (inserted) it->second.canonicalize();
    if (!inserted) {
        it->second += coef;
        if (it->second == 0) terms_.erase(it);
    }
}

DglaElement& DglaElement::operator+=(const DglaElement& other)
{
    if (other.is_zero()) return *this;
    if (is_zero()) degree_ = other.degree_;
    for (const auto& [t, c] : other.terms_) add(t, c);
    return *this;
}

DglaElement& DglaElement::operator-=(const DglaElement& other)
{
    if (other.is_zero()) return *this;
    if (is_zero()) degree_ = other.degree_;
    for (const auto& [t, c] : other.terms_) add(t, -c);
    return *this;
}

DglaElement& DglaElement::operator*=(const Rational& s)
{
    if (s == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [t, c] : terms_) c *= s;
    return *this;
}

PolyMatrix DglaElement::component(Form f, std::size_t n) const
{
    PolyMatrix m(n);
    for (const auto& [t, c] : terms_) {
        if (t.form == f) m(t.i, t.j).add_term(t.mono, c);
    }
    return m;
}

DglaElement DglaElement::from_component(const PolyMatrix& m, Form f)
{
    DglaElement out(form_degree(f));
    for (std::size_t i = 0; i < m.n(); ++i)
        for (std::size_t j = 0; j < m.n(); ++j) add_poly(out, m(i, j), i, j, f, 1);
    return out;
}

std::string DglaElement::to_string(std::size_t n) const
{
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [t, c] : terms_) {
        if (!first) os << " + ";
        os << logflat::to_string(c) << "*" << term_label(t, n);
        first = false;
    }
    return os.str();
}

DglaElement differential_d(const DglaElement& x, const CurveParams& params)
{
    return map_terms(x, x.degree() + 1, [&](DglaElement& out, const Term& t, const Rational& c) {
        const Rational w(t.mono.weight(params));
        switch (t.form) {
        case Form::One:
            out.add({t.mono, t.i, t.j, Form::Alpha0}, c * w);
            add_poly(out, V_of(t.mono, params), t.i, t.j, Form::Beta, c);
            break;
        case Form::Alpha0:
            // d(g alpha0) = V(g) beta ^ alpha0
            add_poly(out, V_of(t.mono, params), t.i, t.j, Form::Alpha0Beta, -c);
            break;
        case Form::Beta:
            out.add({t.mono, t.i, t.j, Form::Alpha0Beta}, c * (w - params.w0()));
            break;
        case Form::Alpha0Beta: break;
        }
    });
}

DglaElement alpha0_ad_S(const DglaElement& x, const DglaContext& ctx)
{
    return map_terms(x, x.degree() + 1, [&](DglaElement& out, const Term& t, const Rational& c) {
        const Wedge wd = wedge(Form::Alpha0, t.form);
        if (wd.sign == 0) return;
        out.add({t.mono, t.i, t.j, wd.form}, c * wd.sign * ctx.s.ad_eigenvalue(t.i, t.j));
    });
}

DglaElement delta_S(const DglaElement& x, const DglaContext& ctx)
{
    return differential_d(x, ctx.params) + alpha0_ad_S(x, ctx);
}

DglaElement iota_E(const DglaElement& x)
{
    return map_terms(x, x.degree() - 1, [&](DglaElement& out, const Term& t, const Rational& c) {
        if (t.form == Form::Alpha0) out.add({t.mono, t.i, t.j, Form::One}, c);
        if (t.form == Form::Alpha0Beta) out.add({t.mono, t.i, t.j, Form::Beta}, c);
    });
}

DglaElement lie_LE(const DglaElement& x, const CurveParams& params)
{
    return map_terms(x, x.degree(), [&](DglaElement& out, const Term& t, const Rational& c) {
        out.add(t, c * Rational(t.mono.weight(params) + form_weight_shift(t.form, params)));
    });
}

DglaElement projector_P(const DglaElement& x)
{
    return map_terms(x, x.degree(), [&](DglaElement& out, const Term& t, const Rational& c) {
        if (t.form == Form::Alpha0 || t.form == Form::Alpha0Beta) out.add(t, c);
    });
}

DglaElement bracket(const DglaElement& x, const DglaElement& y)
{
    if (x.degree() + y.degree() > 2) throw std::domain_error("bracket: result degree exceeds 2");
    DglaElement out(x.degree() + y.degree());
    for (const auto& [tx, cx] : x.terms()) {
        for (const auto& [ty, cy] : y.terms()) {
            const Wedge wd = wedge(tx.form, ty.form);
            if (wd.sign == 0) continue;
            const Monomial m = times(tx.mono, ty.mono);
            const Rational c = cx * cy * wd.sign;
            // [E_ij, E_kl] = delta_jk E_il - delta_li E_kj
            if (tx.j == ty.i) out.add({m, tx.i, ty.j, wd.form}, c);
            if (ty.j == tx.i) out.add({m, ty.i, tx.j, wd.form}, -c);
        }
    }
    return out;
}

std::map<Rational, DglaElement> eigen_decompose(const DglaElement& x, const DglaContext& ctx)
{
    std::map<Rational, DglaElement> out;
    for (const auto& [t, c] : x.terms()) {
        auto [it, inserted] = out.try_emplace(eigenvalue(t, ctx), DglaElement(x.degree()));
        it->second.add(t, c);
    }
    return out;
}

DglaElement homotopy_h(const DglaElement& x, const DglaContext& ctx)
{
    DglaElement out(x.degree() - 1);
    for (const auto& [u, part] : eigen_decompose(x, ctx)) {
        if (u == 0) continue;
        out += Rational(1) / u * iota_E(part);
    }
    return out;
}

ComplexSlice::ComplexSlice(Rational u, const DglaContext& ctx) : u_(std::move(u)), ctx_(ctx)
{
    u_.canonicalize();
    const std::size_t n = ctx.n();
    for (Form f : {Form::One, Form::Alpha0, Form::Beta, Form::Alpha0Beta}) {
        std::vector<std::tuple<std::int64_t, int, std::size_t, std::size_t, Monomial>> keyed;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const Rational w = u_ - form_weight_shift(f, ctx.params) - ctx.s.ad_eigenvalue(i, j);
                if (!is_integer(w) || w < 0) continue;
                const std::int64_t wi = to_int64(w);
                if (wi > ctx.w_max) {
                    throw TruncationOverflow("slice needs weight " + std::to_string(wi) + " above the cap "
                                             + std::to_string(ctx.w_max));
                }
                for (const Monomial& m : weight_basis(wi, ctx.params)) keyed.emplace_back(wi, -m.x, i, j, m);
            }
        }
        std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
            return std::tie(std::get<0>(a), std::get<1>(a), std::get<2>(a), std::get<3>(a))
                 < std::tie(std::get<0>(b), std::get<1>(b), std::get<2>(b), std::get<3>(b));
        });
        auto& bucket = bases_[static_cast<std::size_t>(form_degree(f))];
        for (const auto& k : keyed) {
            const Term t{std::get<4>(k), std::get<2>(k), std::get<3>(k), f};
            index_.emplace(t, bucket.size());
            bucket.push_back(t);
        }
    }

    for (int k = 0; k < 3; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        delta_[idx] = operator_matrix(k, k + 1, [&](const DglaElement& e) { return logflat::delta_S(e, ctx_); });
        d_[idx] = operator_matrix(k, k + 1, [&](const DglaElement& e) { return differential_d(e, ctx_.params); });
        aads_[idx] = operator_matrix(k, k + 1, [&](const DglaElement& e) { return logflat::alpha0_ad_S(e, ctx_); });
        iota_[idx] = operator_matrix(k, k - 1, [](const DglaElement& e) { return logflat::iota_E(e); });
        p_[idx] = operator_matrix(k, k, [](const DglaElement& e) { return projector_P(e); });
        le_[idx] = operator_matrix(k, k, [&](const DglaElement& e) { return lie_LE(e, ctx_.params); });
    }
}

std::size_t ComplexSlice::dim(int degree) const
{
    if (degree < 0 || degree > 2) return 0;
    return bases_[static_cast<std::size_t>(degree)].size();
}

long ComplexSlice::index_of(const Term& t) const
{
    auto it = index_.find(t);
    return it == index_.end() ? -1 : static_cast<long>(it->second);
}

Vector ComplexSlice::coordinates(const DglaElement& x) const
{
    Vector v(dim(x.degree()));
    for (const auto& [t, c] : x.terms()) {
        const long k = index_of(t);
        if (k < 0) throw std::invalid_argument("ComplexSlice::coordinates: term outside the slice");
        v[static_cast<std::size_t>(k)] = c;
    }
    return v;
}

DglaElement ComplexSlice::element(int degree, const Vector& coords) const
{
    if (coords.size() != dim(degree)) throw std::invalid_argument("ComplexSlice::element: size mismatch");
    DglaElement out(degree);
    for (std::size_t k = 0; k < coords.size(); ++k) out.add(basis(degree)[k], coords[k]);
    return out;
}

Matrix ComplexSlice::homotopy(int degree) const
{
    const Matrix& iota = iota_E(degree);
    if (u_ == 0) return Matrix(iota.rows(), iota.cols());
    return iota * (Rational(1) / u_);
}

Matrix ComplexSlice::ad(const DglaElement& w, int degree) const
{
    const int target = degree + w.degree();
    if (target > 2) return Matrix(0, dim(degree));
    return operator_matrix(degree, target, [&](const DglaElement& e) { return bracket(w, e); });
}

std::vector<Rational> slice_eigenvalues(const DglaContext& ctx, const Rational& u_min, const Rational& u_max)
{
    std::set<Rational> found;
    const auto spectrum = ctx.s.ad_spectrum();
    for (Form f : {Form::One, Form::Alpha0, Form::Beta, Form::Alpha0Beta}) {
        const std::int64_t shift = form_weight_shift(f, ctx.params);
        for (const Rational& lambda : spectrum) {
            for (std::int64_t w = 0;; ++w) {
                const Rational u = Rational(w + shift) + lambda;
                if (u > u_max) break;
                if (w > ctx.w_max) throw TruncationOverflow("eigenvalue search exceeds the weight cap");
                if (u >= u_min && !weight_basis(w, ctx.params).empty()) found.insert(u);
            }
        }
    }
    return {found.begin(), found.end()};
}

namespace {

std::vector<std::string> labels_of(const std::vector<Term>& basis, std::size_t n)
{
    std::vector<std::string> out;
    out.reserve(basis.size());
    for (const auto& t : basis) out.push_back(term_label(t, n));
    return out;
}

}  // namespace

std::vector<std::string> U0Complex::labels0(std::size_t n) const { return labels_of(basis0, n); }
std::vector<std::string> U0Complex::labels1(std::size_t n) const { return labels_of(basis1, n); }

U0Complex U0_complex(const DglaContext& ctx)
{
    const ComplexSlice slice(0, ctx);
    U0Complex out;
    out.basis0 = slice.basis(0);
    std::vector<std::size_t> beta_rows;
    for (std::size_t k = 0; k < slice.dim(1); ++k) {
        if (slice.basis(1)[k].form == Form::Beta) {
            beta_rows.push_back(k);
            out.basis1.push_back(slice.basis(1)[k]);
        }
    }
    out.delta = Matrix(beta_rows.size(), out.basis0.size());
    for (std::size_t r = 0; r < beta_rows.size(); ++r)
        for (std::size_t c = 0; c < out.basis0.size(); ++c) out.delta(r, c) = slice.delta_S(0)(beta_rows[r], c);
    return out;
}

std::int64_t CohomologyClass::weight(const CurveParams& params) const
{
    return a * params.q() + b * params.p() + c * params.pq();
}

WeightedPolynomial CohomologyClass::polynomial(const CurveParams& params) const
{
    return WeightedPolynomial::f_power(params, c) * WeightedPolynomial::monomial({a, b});
}

std::string CohomologyClass::label(std::size_t n) const
{
    std::string out;
    const Monomial m{a, b};
    if (m != Monomial{0, 0}) out += m.label() + "*";
    if (c == 1) out += "f*";
    if (c > 1) out += "f^" + std::to_string(c) + "*";
    return out + elementary_label(n, i, j);
}

Vector u0_coordinates(const PolyMatrix& m, const std::vector<Term>& basis)
{
    std::map<std::tuple<Monomial, std::size_t, std::size_t>, std::size_t> index;
    for (std::size_t k = 0; k < basis.size(); ++k) index.emplace(std::tuple{basis[k].mono, basis[k].i, basis[k].j}, k);
    Vector v(basis.size());
    for (std::size_t i = 0; i < m.n(); ++i) {
        for (std::size_t j = 0; j < m.n(); ++j) {
            for (const auto& [mono, c] : m(i, j).terms()) {
                auto it = index.find({mono, i, j});
                if (it == index.end()) {
                    throw std::invalid_argument("u0_coordinates: " + mono.label() + "*" + elementary_label(m.n(), i, j)
                                                + " is not in the basis");
                }
                v[it->second] = c;
            }
        }
    }
    return v;
}

PolyMatrix u0_matrix(const Vector& coords, const std::vector<Term>& basis, std::size_t n)
{
    if (coords.size() != basis.size()) throw std::invalid_argument("u0_matrix: size mismatch");
    PolyMatrix m(n);
    for (std::size_t k = 0; k < basis.size(); ++k) m(basis[k].i, basis[k].j).add_term(basis[k].mono, coords[k]);
    return m;
}

U0Cohomology cohomology_U0(const DglaContext& ctx, const U0Complex& u0)
{
    const auto& params = ctx.params;
    U0Cohomology out;
    const std::size_t n = ctx.n();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const Rational lambda = ctx.s.ad_eigenvalue(i, j);
            const Rational c0 = -lambda / params.pq();
            if (is_integer(c0) && c0 >= 0) out.h0.push_back({static_cast<int>(to_int64(c0)), 0, 0, i, j});
            const Rational w = Rational(params.w0()) - lambda;
            if (is_integer(w) && w >= 0) {
                const WeightIndex wi = weight_decompose(to_int64(w), params);
                if (wi.c >= 0 && wi.a <= params.p() - 2 && wi.b <= params.q() - 2) {
                    out.h1.push_back({static_cast<int>(wi.c), static_cast<int>(wi.a), static_cast<int>(wi.b), i, j});
                }
            }
        }
    }
    auto by_weight = [&](const CohomologyClass& x, const CohomologyClass& y) {
        return std::tuple(x.weight(params), x.i, x.j) < std::tuple(y.weight(params), y.i, y.j);
    };
    std::sort(out.h0.begin(), out.h0.end(), by_weight);
    std::sort(out.h1.begin(), out.h1.end(), by_weight);

    out.h0_vectors = Matrix(u0.basis0.size(), out.h0.size());
    for (std::size_t k = 0; k < out.h0.size(); ++k) {
        const auto& cls = out.h0[k];
        out.h0_vectors.set_column(k, u0_coordinates(PolyMatrix::single(n, cls.i, cls.j, cls.polynomial(params)), u0.basis0));
    }
    out.h1_vectors = Matrix(u0.basis1.size(), out.h1.size());
    for (std::size_t k = 0; k < out.h1.size(); ++k) {
        const auto& cls = out.h1[k];
        out.h1_vectors.set_column(k, u0_coordinates(PolyMatrix::single(n, cls.i, cls.j, cls.polynomial(params)), u0.basis1));
    }
    return out;
}

}  // namespace logflat
