#include "logflat/moduli.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace logflat {

namespace {

PolyMatrix basis_matrix(const Term& t, std::size_t n)
{
    return PolyMatrix::single(n, t.i, t.j, WeightedPolynomial::monomial(t.mono));
}

std::string plain_label(const Term& t, std::size_t n)
{
    return term_label(Term{t.mono, t.i, t.j, Form::One}, n);
}

std::int64_t max_weight(const PolyMatrix& m, const CurveParams& params)
{
    std::int64_t w = 0;
    for (std::size_t i = 0; i < m.n(); ++i)
        for (std::size_t j = 0; j < m.n(); ++j)
            for (const auto& [mono, c] : m(i, j).terms()) w = std::max(w, mono.weight(params));
    return w;
}

void guard(const PolyMatrix& m, const DglaContext& ctx, const char* what)
{
    if (max_weight(m, ctx.params) > ctx.w_max) {
        throw TruncationOverflow(std::string("gauge action: ") + what + " exceeds the weight cap " +
                                 std::to_string(ctx.w_max));
    }
}

/// Columns: coordinates in dst of [x, e_k] for the basis elements of src.
Matrix bracket_matrix(const PolyMatrix& x, const std::vector<Term>& src, const std::vector<Term>& dst, std::size_t n)
{
    Matrix out(dst.size(), src.size());
    for (std::size_t k = 0; k < src.size(); ++k) out.set_column(k, u0_coordinates(bracket(x, basis_matrix(src[k], n)), dst));
    return out;
}

/// Solve basis * X = m column by column; the columns of m must lie in the span.
Matrix express_in(const Matrix& basis, const Matrix& m, const char* what)
{
    Matrix out(basis.cols(), m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c) {
        auto x = solve(basis, m.column(c));
        if (!x) throw std::logic_error(std::string(what) + ": vector outside the expected span");
        out.set_column(c, *x);
    }
    return out;
}

Matrix block_diagonal(const Matrix& a, const Matrix& b)
{
    Matrix out(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
    for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c) out(a.rows() + r, a.cols() + c) = b(r, c);
    return out;
}

/// The subspace {v : v restricted to `constrained` lies in the column span of
/// `image`}: unconstrained unit vectors first, then independent image columns.
struct ConstrainedSpace {
    Matrix basis;  // ambient x dim
    std::vector<std::string> labels;
};

ConstrainedSpace constrained_space(const std::vector<std::string>& ambient_labels,
                                   const std::vector<std::size_t>& constrained, const Matrix& image,
                                   const std::vector<std::string>& generator_labels)
{
    const std::size_t dim = ambient_labels.size();
    std::vector<bool> is_constrained(dim, false);
    for (auto k : constrained) is_constrained[k] = true;
    std::vector<Vector> cols;
    ConstrainedSpace out;
    for (std::size_t k = 0; k < dim; ++k) {
        if (is_constrained[k]) continue;
        Vector v(dim);
        v[k] = 1;
        cols.push_back(std::move(v));
        out.labels.push_back(ambient_labels[k]);
    }
    for (auto pivot : rref(image).pivots) {
        Vector v(dim);
        for (std::size_t r = 0; r < constrained.size(); ++r) v[constrained[r]] = image(r, pivot);
        cols.push_back(std::move(v));
        out.labels.push_back(generator_labels[pivot]);
    }
    out.basis = Matrix::from_columns(dim, cols);
    return out;
}

/// Columns [N(0), E] restricted to the listed elementary matrices, which must
/// span an ad-stable subspace.
Matrix ad_on_elementaries(const LieMatrix& x, const std::vector<IndexPair>& pairs)
{
    Matrix out(pairs.size(), pairs.size());
    const std::size_t n = x.rows();
    for (std::size_t c = 0; c < pairs.size(); ++c) {
        const LieMatrix b = bracket(x, elementary(n, pairs[c].first, pairs[c].second));
        for (std::size_t r = 0; r < pairs.size(); ++r) out(r, c) = b(pairs[r].first, pairs[r].second);
    }
    return out;
}

Matrix to_matrix(const std::vector<Vector>& cols, std::size_t rows)
{
    return Matrix::from_columns(rows, cols);
}

bool vector_in_H1(const Vector& c, const Contraction& con)
{
    const Vector projected = con.a.block(1) * (con.b.block(1) * c);
    for (std::size_t k = 0; k < c.size(); ++k)
        if (projected[k] != c[k]) return false;
    return true;
}

ConnectionElement act_exp(const PolyMatrix& u, const ConnectionElement& w, const DglaContext& ctx)
{
    return gauge_act(exp_nilpotent(u), exp_nilpotent(-u), w, ctx);
}

}  // namespace

void validate_connection(const ConnectionElement& w, const U0Complex& u0, std::size_t n)
{
    if (w.C.n() != n || w.N.n() != n) throw std::invalid_argument("connection: matrix size does not match n");
    try {
        (void)u0_coordinates(w.C, u0.basis1);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("connection C: ") + e.what());
    }
    try {
        (void)u0_coordinates(w.N, u0.basis0);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("connection N: ") + e.what());
    }
}

ConnectionElement connection_from_coordinates(const U0Complex& u0, const Vector& c, const Vector& n_coords,
                                              std::size_t n)
{
    return {u0_matrix(c, u0.basis1, n), u0_matrix(n_coords, u0.basis0, n)};
}

ResidueDatum ResidueDatum::make(const SemisimpleData& s, const LieMatrix& n0)
{
    const std::size_t n = s.n();
    if (n0.rows() != n || n0.cols() != n) throw InputError("residue datum: N0 must be " + std::to_string(n) + "x" + std::to_string(n));
    if (!is_nilpotent(n0)) throw InputError("residue datum: N0 is not nilpotent");
    const SupportPattern gs = centralizer_pattern(s);
    if (!gs.supports(n0)) throw InputError("residue datum: N0 does not commute with S");
    return {s.as_matrix() + n0, s, n0};
}

ResidueDatum ResidueDatum::semisimple(const SemisimpleData& s)
{
    return make(s, LieMatrix(s.n(), s.n()));
}

GaugeWord GaugeWord::identity(std::size_t n)
{
    return {LieMatrix::identity(n), {}};
}

PolyMatrix GaugeWord::evaluate() const
{
    PolyMatrix g = PolyMatrix::from_constant(g0);
    for (const auto& u : factors) g = exp_nilpotent(u) * g;
    return g;
}

PolyMatrix GaugeWord::evaluate_inverse() const
{
    auto inv = inverse(g0);
    if (!inv) throw std::invalid_argument("gauge word: g0 is not invertible");
    PolyMatrix g = PolyMatrix::from_constant(*inv);
    for (const auto& u : factors) g = g * exp_nilpotent(-u);
    return g;
}

void validate_gauge_word(const GaugeWord& g, const DglaContext& ctx)
{
    const std::size_t n = ctx.n();
    if (g.g0.rows() != n || g.g0.cols() != n) throw std::invalid_argument("gauge word: g0 has the wrong size");
    if (!centralizer_pattern(ctx.s).supports(g.g0)) throw std::invalid_argument("gauge word: g0 is not in G_S");
    if (determinant(g.g0) == 0) throw std::invalid_argument("gauge word: g0 is not invertible");
    const U0Complex u0 = U0_complex(ctx);
    for (std::size_t k = 0; k < g.factors.size(); ++k) {
        const auto& u = g.factors[k];
        const std::string where = "gauge word factor " + std::to_string(k);
        if (u.n() != n) throw std::invalid_argument(where + ": wrong size");
        try {
            (void)u0_coordinates(u, u0.basis0);
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument(where + ": not in U_0^0");
        }
        std::optional<std::int64_t> weight;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                for (const auto& [mono, c] : u(i, j).terms()) {
                    const auto w = mono.weight(ctx.params);
                    if (weight && *weight != w) throw std::invalid_argument(where + ": not weight-homogeneous");
                    weight = w;
                }
            }
        }
        if (weight && *weight <= 0) throw std::invalid_argument(where + ": weight must be positive");
    }
}

PolyMatrix curvature(const ConnectionElement& w, const CurveParams& params)
{
    return apply_V(w.N, params) + bracket(w.C, w.N);
}

Vector curvature_vector(const ConnectionElement& w, const U0Complex& u0, const CurveParams& params)
{
    return u0_coordinates(curvature(w, params), u0.basis1);
}

CurvatureTensor curvature_tensor(const U0Complex& u0, const DglaContext& ctx)
{
    const std::size_t n = ctx.n();
    CurvatureTensor t;
    t.linear = u0.delta;
    t.quad.assign(u0.basis1.size(), Matrix(u0.basis1.size(), u0.basis0.size()));
    for (std::size_t k = 0; k < u0.basis1.size(); ++k) {
        const PolyMatrix ck = basis_matrix(u0.basis1[k], n);
        for (std::size_t l = 0; l < u0.basis0.size(); ++l) {
            const Vector v = u0_coordinates(bracket(ck, basis_matrix(u0.basis0[l], n)), u0.basis1);
            for (std::size_t m = 0; m < v.size(); ++m)
                if (v[m] != 0) t.quad[m](k, l) = v[m];
        }
    }
    return t;
}

LieMatrix residue(const ConnectionElement& w)
{
    return w.N.at_origin();
}

bool in_WA(const ConnectionElement& w, const ResidueDatum& rd)
{
    const LieMatrix r = residue(w);
    if (!is_nilpotent(r)) return false;
    const SupportPattern gs = centralizer_pattern(rd.S);
    if (!gs.supports(r)) return false;
    return orbit_member(r, rd.N0, gs);
}

ConnectionElement gauge_act(const PolyMatrix& g, const PolyMatrix& g_inv, const ConnectionElement& w,
                            const DglaContext& ctx)
{
    guard(g, ctx, "g");
    guard(g_inv, ctx, "g^-1");
    const PolyMatrix gc = g * w.C;
    guard(gc, ctx, "g C");
    const PolyMatrix gn = g * w.N;
    guard(gn, ctx, "g N");
    ConnectionElement out{gc * g_inv - apply_V(g, ctx.params) * g_inv, gn * g_inv};
    guard(out.C, ctx, "g * C");
    guard(out.N, ctx, "g * N");
    return out;
}

ConnectionElement gauge_act(const GaugeWord& g, const ConnectionElement& w, const DglaContext& ctx)
{
    validate_gauge_word(g, ctx);
    return gauge_act(g.evaluate(), g.evaluate_inverse(), w, ctx);
}

bool in_H1(const PolyMatrix& gamma, const U0Contraction& uc)
{
    return vector_in_H1(u0_coordinates(gamma, uc.u0.basis1), uc.contraction);
}

NormalizationResult normalize_to_H1(const PolyMatrix& gamma, const DglaContext& ctx, std::size_t max_correction_rounds)
{
    const std::size_t n = ctx.n();
    const U0Contraction uc = u0_contraction(ctx);
    const auto& u0 = uc.u0;
    const auto& con = uc.contraction;

    NormalizationResult out;
    out.word = GaugeWord::identity(n);
    ConnectionElement current{gamma, PolyMatrix(n)};
    if (in_H1(gamma, uc)) {
        out.gamma = gamma;
        out.in_H1 = true;
        out.method = "already normal";
        return out;
    }

    // Sweep: at each weight w' > w0 remove the image part of gamma_w' with
    // exp(h gamma_w'); the factor has weight w' - w0.
    std::set<std::int64_t> weights;
    for (const auto& t : u0.basis1) {
        const auto w = t.mono.weight(ctx.params);
        if (w > ctx.params.w0()) weights.insert(w);
    }
    for (const auto w : weights) {
        Vector c = u0_coordinates(current.C, u0.basis1);
        for (std::size_t k = 0; k < c.size(); ++k)
            if (u0.basis1[k].mono.weight(ctx.params) != w) c[k] = 0;
        const Vector u = con.h.block(1) * c;
        if (is_zero(u)) continue;
        const PolyMatrix um = u0_matrix(u, u0.basis0, n);
        current = act_exp(um, current, ctx);
        out.word.factors.push_back(um);
        ++out.sweep_steps;
    }
    if (in_H1(current.C, uc)) {
        out.gamma = current.C;
        out.in_H1 = true;
        out.method = "weight sweep";
        return out;
    }

    // Lower weights of gamma can feed back into weights already swept. Solve
    // the linearization  P(-V(v) + [v, gamma]) = -P(gamma)  for v of positive
    // weight, P = id - a b, and apply its homogeneous parts in weight order.
    std::vector<std::size_t> unknowns;
    for (std::size_t l = 0; l < u0.basis0.size(); ++l)
        if (u0.basis0[l].mono.weight(ctx.params) > 0) unknowns.push_back(l);
    const Matrix proj = Matrix::identity(u0.basis1.size()) - con.a.block(1) * con.b.block(1);
    for (std::size_t round = 0; round < max_correction_rounds; ++round) {
        const Vector c = u0_coordinates(current.C, u0.basis1);
        const Vector residual = proj * c;
        if (is_zero(residual)) break;
        Matrix jac(u0.basis1.size(), unknowns.size());
        for (std::size_t k = 0; k < unknowns.size(); ++k) {
            const PolyMatrix e = basis_matrix(u0.basis0[unknowns[k]], n);
            const Vector col = u0_coordinates(bracket(e, current.C) - apply_V(e, ctx.params), u0.basis1);
            jac.set_column(k, proj * col);
        }
        Vector rhs = residual;
        for (auto& r : rhs) r = -r;
        const auto x = solve(jac, rhs);
        if (!x) break;
        std::map<std::int64_t, Vector> by_weight;
        for (std::size_t k = 0; k < unknowns.size(); ++k) {
            if ((*x)[k] == 0) continue;
            const auto w = u0.basis0[unknowns[k]].mono.weight(ctx.params);
            auto [it, inserted] = by_weight.try_emplace(w, Vector(u0.basis0.size()));
            it->second[unknowns[k]] = (*x)[k];
        }
        for (const auto& [w, v] : by_weight) {
            const PolyMatrix um = u0_matrix(v, u0.basis0, n);
            current = act_exp(um, current, ctx);
            out.word.factors.push_back(um);
        }
        ++out.correction_rounds;
    }
    out.gamma = current.C;
    out.in_H1 = in_H1(current.C, uc);
    out.method = out.in_H1 ? "weight sweep with linearized correction" : "failed";
    return out;
}

MCReport mc_verify(const ConnectionElement& w, const ResidueDatum& rd, const DglaContext& ctx)
{
    const U0Complex u0 = U0_complex(ctx);
    validate_connection(w, u0, ctx.n());
    MCReport r;
    for (const auto& t : u0.basis1) r.labels.push_back(plain_label(t, ctx.n()));
    r.residual = curvature_vector(w, u0, ctx.params);
    r.flat = is_zero(r.residual);
    r.residue = residue(w);
    r.residue_nilpotent = is_nilpotent(r.residue);
    r.in_WA = in_WA(w, rd);
    return r;
}

namespace {

struct FamilyCoordinates {
    std::vector<ParamPoly> c;
    std::vector<ParamPoly> n;
};

FamilyCoordinates family_coordinates(const ParamFamily& family, const U0Complex& u0, std::size_t n)
{
    auto index_of = [&](const std::vector<Term>& basis) {
        std::map<std::string, std::size_t> idx;
        for (std::size_t k = 0; k < basis.size(); ++k) idx.emplace(plain_label(basis[k], n), k);
        return idx;
    };
    auto read = [](const std::map<std::string, std::string>& entries, const std::map<std::string, std::size_t>& idx,
                   std::size_t dim, const std::string& which) {
        std::vector<ParamPoly> v(dim);
        for (const auto& [label, expr] : entries) {
            std::string key = label;
            if (which == "C" && key.size() > 5 && key.ends_with("*beta")) key.resize(key.size() - 5);
            if (which == "N" && key.size() > 7 && key.ends_with("*alpha0")) key.resize(key.size() - 7);
            auto it = idx.find(key);
            if (it == idx.end()) throw InputError("family: " + label + " is not a basis label of " + which);
            v[it->second] = ParamPoly::parse(expr);
        }
        return v;
    };
    return {read(family.C, index_of(u0.basis1), u0.basis1.size(), "C"),
            read(family.N, index_of(u0.basis0), u0.basis0.size(), "N")};
}

}  // namespace

ConnectionElement family_point(const ParamFamily& family, const std::map<std::string, Rational>& values,
                               const DglaContext& ctx)
{
    const U0Complex u0 = U0_complex(ctx);
    const FamilyCoordinates fc = family_coordinates(family, u0, ctx.n());
    auto eval = [&](const std::vector<ParamPoly>& v) {
        Vector out(v.size());
        try {
            for (std::size_t k = 0; k < v.size(); ++k) out[k] = v[k].evaluate(values);
        } catch (const std::invalid_argument& e) {
            throw InputError(std::string("family: ") + e.what());
        }
        return out;
    };
    return connection_from_coordinates(u0, eval(fc.c), eval(fc.n), ctx.n());
}

FamilyReport mc_family_verify(const ParamFamily& family, const DglaContext& ctx)
{
    const std::size_t n = ctx.n();
    const U0Complex u0 = U0_complex(ctx);
    const FamilyCoordinates fc = family_coordinates(family, u0, n);
    const auto& c = fc.c;
    const auto& nv = fc.n;

    const CurvatureTensor t = curvature_tensor(u0, ctx);
    FamilyReport out;
    for (std::size_t m = 0; m < u0.basis1.size(); ++m) {
        ParamPoly r;
        for (std::size_t l = 0; l < u0.basis0.size(); ++l) {
            if (nv[l].is_zero()) continue;
            if (t.linear(m, l) != 0) r += ParamPoly(t.linear(m, l)) * nv[l];
            for (std::size_t k = 0; k < u0.basis1.size(); ++k)
                if (t.quad[m](k, l) != 0 && !c[k].is_zero()) r += ParamPoly(t.quad[m](k, l)) * c[k] * nv[l];
        }
        if (!r.is_zero()) out.residuals.emplace(plain_label(u0.basis1[m], n), r);
    }
    out.identically_zero = out.residuals.empty();
    return out;
}

QAData qa_data(const ResidueDatum& rd, const DglaContext& ctx)
{
    const std::size_t n = ctx.n();
    const U0Complex u0 = U0_complex(ctx);
    const U0Cohomology coh = cohomology_U0(ctx, u0);
    QAData out{.h1_labels = {},
               .h0_labels = {},
               .parabolic = parabolic_pattern(ctx.s, ctx.params),
               .levi = centralizer_pattern(ctx.s),
               .nilradical = {},
               .N0 = rd.N0,
               .orbit_type = jordan_type(rd.N0),
               .F_S = {}};
    for (const auto& cls : coh.h1) out.h1_labels.push_back(cls.label(n));
    for (const auto& cls : coh.h0) out.h0_labels.push_back(cls.label(n));
    for (const auto& p : out.parabolic.allowed())
        if (!out.levi.contains(p.first, p.second)) out.nilradical.push_back(p);

    out.F_S.assign(coh.h1.size(), Matrix(coh.h1.size(), coh.h0.size()));
    for (std::size_t k = 0; k < coh.h1.size(); ++k) {
        const auto& ck = coh.h1[k];
        const PolyMatrix cm = PolyMatrix::single(n, ck.i, ck.j, ck.polynomial(ctx.params));
        for (std::size_t l = 0; l < coh.h0.size(); ++l) {
            const auto& nl = coh.h0[l];
            const PolyMatrix nm = PolyMatrix::single(n, nl.i, nl.j, nl.polynomial(ctx.params));
            const Vector v = u0_coordinates(bracket(cm, nm), u0.basis1);
            const auto x = solve(coh.h1_vectors, v);
            if (!x) throw std::logic_error("qa_data: [H^1, H^0] left H^1");
            for (std::size_t m = 0; m < x->size(); ++m) out.F_S[m](k, l) = (*x)[m];
        }
    }
    return out;
}

std::array<std::size_t, 3> TangentComplexData::dims() const
{
    return {labels[0].size(), labels[1].size(), labels[2].size()};
}

TangentDims cohomology_dims(const TangentComplexData& t)
{
    const auto d = t.dims();
    const std::size_t r0 = rank(t.gauge_derivative);
    const std::size_t r1 = rank(t.curvature_derivative);
    return {d[0] - r0, d[1] - r0 - r1, d[2] - r1};
}

namespace {

struct BuiltComplex {
    TangentComplexData data;
    Matrix degree1_basis;  // constrained space inside the ambient degree-1 space
};

void require_flat(const ConnectionElement& w, const U0Complex& u0, const DglaContext& ctx)
{
    validate_connection(w, u0, ctx.n());
    if (!is_zero(curvature_vector(w, u0, ctx.params)))
        throw std::invalid_argument("tangent complex: the connection is not flat");
}

std::vector<std::string> suffixed(const std::vector<Term>& basis, std::size_t n, const std::string& suffix)
{
    std::vector<std::string> out;
    for (const auto& t : basis) out.push_back(plain_label(t, n) + suffix);
    return out;
}

BuiltComplex build_W(const ConnectionElement& w, const U0Complex& u0, const DglaContext& ctx)
{
    const std::size_t n = ctx.n();
    const std::size_t d0 = u0.basis0.size();
    const std::size_t d1 = u0.basis1.size();

    const Matrix adC_0to1 = bracket_matrix(w.C, u0.basis0, u0.basis1, n);
    const Matrix adN_0to0 = bracket_matrix(w.N, u0.basis0, u0.basis0, n);
    const Matrix adN_1to1 = bracket_matrix(w.N, u0.basis1, u0.basis1, n);

    const Matrix amb_d0 = vstack(u0.delta + adC_0to1, adN_0to0);
    const Matrix amb_d1 = hstack(-adN_1to1, u0.delta + adC_0to1);

    std::vector<std::string> amb_labels = suffixed(u0.basis1, n, "*beta");
    for (const auto& l : suffixed(u0.basis0, n, "*alpha0")) amb_labels.push_back(l);

    std::vector<std::size_t> constrained;
    std::vector<IndexPair> pairs;
    std::vector<std::string> gen_labels;
    for (std::size_t l = 0; l < d0; ++l) {
        const auto& t = u0.basis0[l];
        if (t.mono == Monomial{0, 0}) {
            constrained.push_back(d1 + l);
            pairs.emplace_back(t.i, t.j);
            gen_labels.push_back("[N(0)," + elementary_label(n, t.i, t.j) + "]*alpha0");
        }
    }
    const ConstrainedSpace T = constrained_space(amb_labels, constrained, ad_on_elementaries(residue(w), pairs), gen_labels);

    BuiltComplex out;
    out.data.labels[0] = suffixed(u0.basis0, n, "");
    out.data.labels[1] = T.labels;
    out.data.labels[2] = suffixed(u0.basis1, n, "*alpha0^beta");
    out.data.gauge_derivative = express_in(T.basis, amb_d0, "tangent complex");
    out.data.curvature_derivative = amb_d1 * T.basis;
    out.degree1_basis = T.basis;
    return out;
}

BuiltComplex build_Q(const ConnectionElement& w, const U0Complex& u0, const U0Cohomology& coh, const DglaContext& ctx)
{
    const std::size_t n = ctx.n();
    const Matrix& i0 = coh.h0_vectors;
    const Matrix& i1 = coh.h1_vectors;
    const std::size_t q0 = coh.h0.size();
    const std::size_t q1 = coh.h1.size();

    const Matrix adC = express_in(i1, bracket_matrix(w.C, u0.basis0, u0.basis1, n) * i0, "reduced model [C, H^0]");
    const Matrix adN0 = express_in(i0, bracket_matrix(w.N, u0.basis0, u0.basis0, n) * i0, "reduced model [N, H^0]");
    const Matrix adN1 = express_in(i1, bracket_matrix(w.N, u0.basis1, u0.basis1, n) * i1, "reduced model [N, H^1]");

    const Matrix amb_d0 = vstack(adC, adN0);
    const Matrix amb_d1 = hstack(-adN1, adC);

    std::vector<std::string> amb_labels;
    for (const auto& cls : coh.h1) amb_labels.push_back(cls.label(n) + "*beta");
    for (const auto& cls : coh.h0) amb_labels.push_back(cls.label(n) + "*alpha0");

    std::vector<std::size_t> constrained;
    std::vector<IndexPair> pairs;
    std::vector<std::string> gen_labels;
    for (std::size_t l = 0; l < q0; ++l) {
        const auto& cls = coh.h0[l];
        if (cls.c == 0) {
            constrained.push_back(q1 + l);
            pairs.emplace_back(cls.i, cls.j);
            gen_labels.push_back("[N(0)," + elementary_label(n, cls.i, cls.j) + "]*alpha0");
        }
    }
    const ConstrainedSpace T = constrained_space(amb_labels, constrained, ad_on_elementaries(residue(w), pairs), gen_labels);

    BuiltComplex out;
    for (const auto& cls : coh.h0) out.data.labels[0].push_back(cls.label(n));
    out.data.labels[1] = T.labels;
    for (const auto& cls : coh.h1) out.data.labels[2].push_back(cls.label(n) + "*alpha0^beta");
    out.data.gauge_derivative = express_in(T.basis, amb_d0, "reduced tangent complex");
    out.data.curvature_derivative = amb_d1 * T.basis;
    out.degree1_basis = T.basis;
    return out;
}

/// Rank of the induced map on cohomology in each degree equals both
/// cohomology dimensions.
bool induces_isomorphism(const TangentComplexData& small, const TangentComplexData& big,
                         const std::array<Matrix, 3>& incl)
{
    const auto sd = small.dims();
    const auto bd = big.dims();
    const TangentDims hs = cohomology_dims(small);
    const TangentDims hb = cohomology_dims(big);
    const std::array<std::size_t, 3> hs_arr{hs.h0, hs.h1, hs.h2};
    const std::array<std::size_t, 3> hb_arr{hb.h0, hb.h1, hb.h2};
    for (int k = 0; k < 3; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        Matrix z_small;
        if (k == 0) z_small = to_matrix(nullspace(small.gauge_derivative), sd[0]);
        else if (k == 1) z_small = to_matrix(nullspace(small.curvature_derivative), sd[1]);
        else z_small = Matrix::identity(sd[2]);
        Matrix b_big(bd[ku], 0);
        if (k == 1) b_big = big.gauge_derivative;
        if (k == 2) b_big = big.curvature_derivative;
        const std::size_t rb = rank(b_big);
        const std::size_t induced = rank(hstack(incl[ku] * z_small, b_big)) - rb;
        if (induced != hs_arr[ku] || induced != hb_arr[ku]) return false;
    }
    return true;
}

TangentDims slice_tangent_dims(const ComplexSlice& sl, const DglaElement& w, const LieMatrix& a_prime)
{
    const Matrix D0 = sl.delta_S(0) + sl.ad(w, 0);
    const Matrix D1 = sl.delta_S(1) + sl.ad(w, 1);
    const std::size_t n = a_prime.rows();
    std::vector<std::string> amb_labels;
    std::vector<std::size_t> constrained;
    std::vector<IndexPair> pairs;
    for (std::size_t k = 0; k < sl.dim(1); ++k) {
        const Term& t = sl.basis(1)[k];
        amb_labels.push_back(term_label(t, n));
        if (t.form == Form::Alpha0 && t.mono == Monomial{0, 0}) {
            constrained.push_back(k);
            pairs.emplace_back(t.i, t.j);
        }
    }
    const ConstrainedSpace T =
        constrained_space(amb_labels, constrained, ad_on_elementaries(a_prime, pairs), std::vector<std::string>(pairs.size()));
    const std::size_t r0 = rank(D0);
    const std::size_t r1 = rank(D1 * T.basis);
    return {sl.dim(0) - r0, T.basis.cols() - r0 - r1, sl.dim(2) - r1};
}

}  // namespace

TangentComplexData tangent_complex(const ConnectionElement& w, const ResidueDatum& rd, const DglaContext& ctx)
{
    (void)rd;
    const U0Complex u0 = U0_complex(ctx);
    require_flat(w, u0, ctx);
    return build_W(w, u0, ctx).data;
}

TangentDims tangent_cohomology_dims(const ConnectionElement& w, const ResidueDatum& rd, const DglaContext& ctx)
{
    return cohomology_dims(tangent_complex(w, rd, ctx));
}

TangentReport tangent_report(const ConnectionElement& w, const ResidueDatum& rd, const DglaContext& ctx,
                             std::optional<Rational> u_bound)
{
    (void)rd;
    const U0Complex u0 = U0_complex(ctx);
    require_flat(w, u0, ctx);

    TangentReport out;
    out.sign_convention =
        "degree-0 map is +(delta_S + ad_w); the derivative of the gauge action is its negative, which changes no rank";
    const BuiltComplex W = build_W(w, u0, ctx);
    out.finite = W.data;
    out.finite_dims = cohomology_dims(W.data);
    out.chain_condition = (W.data.curvature_derivative * W.data.gauge_derivative).is_zero();

    const U0Cohomology coh = cohomology_U0(ctx, u0);
    const auto c_coords = u0_coordinates(w.C, u0.basis1);
    const auto n_coords = u0_coordinates(w.N, u0.basis0);
    const bool c_in_H = solve(coh.h1_vectors, c_coords).has_value();
    const bool n_in_H = solve(coh.h0_vectors, n_coords).has_value();
    if (c_in_H && n_in_H) {
        const BuiltComplex Q = build_Q(w, u0, coh, ctx);
        out.reduced = Q.data;
        out.reduced_dims = cohomology_dims(Q.data);
        const Matrix amb_incl = block_diagonal(coh.h1_vectors, coh.h0_vectors);
        const std::array<Matrix, 3> incl{coh.h0_vectors,
                                         express_in(W.degree1_basis, amb_incl * Q.degree1_basis, "reduced inclusion"),
                                         coh.h1_vectors};
        out.quasi_isomorphic = induces_isomorphism(Q.data, W.data, incl);
    }

    Rational bound;
    if (u_bound) {
        bound = *u_bound;
    } else {
        Rational lam = 0;
        for (const auto& l : ctx.s.ad_spectrum()) lam = std::max(lam, Rational(abs(l)));
        bound = lam + ctx.params.w0() + ctx.params.pq();
    }
    DglaElement wel = DglaElement::from_component(w.C, Form::Beta) + DglaElement::from_component(w.N, Form::Alpha0);
    const LieMatrix a_prime = ctx.s.as_matrix() + residue(w);
    out.big_eigenvalues = slice_eigenvalues(ctx, -bound, bound);
    for (const auto& u : out.big_eigenvalues) {
        const TangentDims d = slice_tangent_dims(ComplexSlice(u, ctx), wel, a_prime);
        out.big_dims.h0 += d.h0;
        out.big_dims.h1 += d.h1;
        out.big_dims.h2 += d.h2;
    }
    out.big_agrees = out.big_dims == out.finite_dims;
    return out;
}

}  // namespace logflat
