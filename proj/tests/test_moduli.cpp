#include "doctest.h"

#include "logflat/moduli.hpp"

#include <random>

using namespace logflat;

namespace {

DglaContext context(int p, int q, std::initializer_list<int> d)
{
    std::vector<Rational> v;
    for (int x : d) v.emplace_back(x);
    return DglaContext{CurveParams(p, q), SemisimpleData(v)};
}

DglaContext three_by_three() { return context(2, 5, {0, 1, 11}); }

WeightedPolynomial mono(int a, int b, const Rational& c = 1) { return WeightedPolynomial::monomial({a, b}, c); }

/// Coordinates of the general eigenvalue-0 connection for (2,5), S = diag(0,1,11),
/// in the parametrization N_23 = N1 f + N2 (x^2 + y^5).
struct Ex {
    Rational C21, C12, C23, C13a, C13b, N13, N1, N2;
};

ConnectionElement connection(const Ex& e)
{
    ConnectionElement w = ConnectionElement::zero(3);
    w.C(1, 0) = mono(0, 1, e.C21);
    w.C(0, 1) = mono(0, 2, e.C12);
    w.C(1, 2) = mono(1, 4, e.C23);
    w.C(0, 2) = mono(2, 2, e.C13a) + mono(0, 7, e.C13b);
    w.N(0, 2) = mono(1, 3, e.N13);
    w.N(1, 2) = mono(2, 0, e.N1 + e.N2) + mono(0, 5, e.N2 - e.N1);
    return w;
}

Rational random_rational(std::mt19937& rng)
{
    std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
    Rational r(num(rng), den(rng));
    r.canonicalize();
    return r;
}

Rational random_nonzero(std::mt19937& rng)
{
    for (;;) {
        Rational r = random_rational(rng);
        if (r != 0) return r;
    }
}

Ex random_ex(std::mt19937& rng)
{
    return {random_rational(rng), random_rational(rng), random_rational(rng), random_rational(rng),
            random_rational(rng), random_rational(rng), random_rational(rng), random_rational(rng)};
}

Rational coefficient_at(const MCReport& r, const std::string& label)
{
    for (std::size_t k = 0; k < r.labels.size(); ++k)
        if (r.labels[k] == label) return r.residual[k];
    throw std::runtime_error("no curvature row " + label);
}

/// Random element of U_0^0 homogeneous of one positive weight.
PolyMatrix random_factor(const U0Complex& u0, const DglaContext& ctx, std::mt19937& rng)
{
    std::set<std::int64_t> weights;
    for (const auto& t : u0.basis0)
        if (t.mono.weight(ctx.params) > 0) weights.insert(t.mono.weight(ctx.params));
    std::vector<std::int64_t> wl(weights.begin(), weights.end());
    const auto w = wl[std::uniform_int_distribution<std::size_t>(0, wl.size() - 1)(rng)];
    Vector v(u0.basis0.size());
    for (std::size_t k = 0; k < v.size(); ++k)
        if (u0.basis0[k].mono.weight(ctx.params) == w) v[k] = random_rational(rng);
    return u0_matrix(v, u0.basis0, ctx.n());
}

GaugeWord random_word(const U0Complex& u0, const DglaContext& ctx, std::mt19937& rng)
{
    GaugeWord g = GaugeWord::identity(ctx.n());
    for (std::size_t i = 0; i < ctx.n(); ++i) g.g0(i, i) = random_nonzero(rng);
    const int len = std::uniform_int_distribution<int>(0, 3)(rng);
    for (int k = 0; k < len; ++k) g.factors.push_back(random_factor(u0, ctx, rng));
    return g;
}

ConnectionElement random_connection(const U0Complex& u0, std::size_t n, std::mt19937& rng)
{
    Vector c(u0.basis1.size()), nv(u0.basis0.size());
    for (auto& x : c) x = random_rational(rng);
    for (auto& x : nv) x = random_rational(rng);
    return connection_from_coordinates(u0, c, nv, n);
}

}  // namespace

TEST_CASE("parameter polynomials parse and simplify")
{
    CHECK(ParamPoly::parse("(s+1)^2 - s^2 - 2*s") == ParamPoly(1));
    CHECK(ParamPoly::parse("110/s * s") == ParamPoly(110));
    CHECK(ParamPoly::parse("3/4") == ParamPoly(Rational(3, 4)));
    CHECK(ParamPoly::parse("-2*s*n + 2*n*s").is_zero());
    CHECK(ParamPoly::parse("s^-2 * s^2") == ParamPoly(1));
    const ParamPoly p = ParamPoly::parse("a*b - 1/2*b^2");
    CHECK(p.evaluate({{"a", 3}, {"b", 2}}) == 4);
    CHECK_THROWS_AS(p.evaluate({{"a", 3}}), std::invalid_argument);
    CHECK_THROWS_AS(ParamPoly::parse("(s+1)^-1"), InputError);
    CHECK_THROWS_AS(ParamPoly::parse("s^"), InputError);
    CHECK_THROWS_AS(ParamPoly::parse("s + * t"), InputError);
    CHECK_THROWS_AS(ParamPoly::parse("(s"), InputError);
    CHECK_THROWS_AS(ParamPoly::parse("1/0"), InputError);
}

TEST_CASE("curvature of the general (2,5) connection gives the three coupled equations")
{
    const auto ctx = three_by_three();
    const auto rd = ResidueDatum::semisimple(ctx.s);
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const Ex e = random_ex(rng);
        const MCReport r = mc_verify(connection(e), rd, ctx);
        CHECK(coefficient_at(r, "x*y^4*E23") == 20 * e.N2 + e.C21 * e.N13);
        CHECK(coefficient_at(r, "y^7*E13") == 5 * e.N13 + e.C12 * (e.N2 - e.N1));
        CHECK(coefficient_at(r, "x^2*y^2*E13") == 6 * e.N13 + e.C12 * (e.N2 + e.N1));
        CHECK(coefficient_at(r, "y*E21") == 0);
        CHECK(coefficient_at(r, "y^2*E12") == 0);
        // Eliminating N13 between the three rows.
        const Rational R1 = coefficient_at(r, "x*y^4*E23");
        const Rational R2 = coefficient_at(r, "x^2*y^2*E13");
        const Rational R3 = coefficient_at(r, "y^7*E13");
        CHECK(11 * R1 - e.C21 * (R2 + R3) == 2 * (110 - e.C21 * e.C12) * e.N2);
    }
}

TEST_CASE("curvature vanishes on trivial connections")
{
    const auto ctx = three_by_three();
    const auto u0 = U0_complex(ctx);
    std::mt19937 rng(3);
    // (C, 0)
    ConnectionElement w = random_connection(u0, 3, rng);
    w.N = PolyMatrix(3);
    CHECK(is_zero(curvature_vector(w, u0, ctx.params)));
    // (0, f^c X)
    ConnectionElement v = ConnectionElement::zero(3);
    v.N(1, 2) = WeightedPolynomial::f_power(ctx.params, 1);
    CHECK(is_zero(curvature_vector(v, u0, ctx.params)));
    CHECK(is_zero(curvature_vector(ConnectionElement::zero(3), u0, ctx.params)));
}

TEST_CASE("validate_connection rejects terms outside U_0")
{
    const auto ctx = three_by_three();
    const auto u0 = U0_complex(ctx);
    ConnectionElement w = ConnectionElement::zero(3);
    w.C(1, 0) = mono(0, 2);
    CHECK_THROWS_AS(validate_connection(w, u0, 3), std::invalid_argument);
    w = ConnectionElement::zero(3);
    w.N(0, 1) = mono(1, 0);
    CHECK_THROWS_AS(validate_connection(w, u0, 3), std::invalid_argument);
    CHECK_THROWS_AS(validate_connection(ConnectionElement::zero(2), u0, 3), std::invalid_argument);
}

TEST_CASE("residue and membership in W(A)")
{
    const auto ctx = three_by_three();
    const auto rd = ResidueDatum::semisimple(ctx.s);
    ConnectionElement w = ConnectionElement::zero(3);
    w.N(1, 2) = WeightedPolynomial::f_power(ctx.params, 1);
    CHECK(residue(w).is_zero());
    CHECK(in_WA(w, rd));
    CHECK(in_WA(ConnectionElement::zero(3), rd));

    // G_S = GL_2 for S = 0: the orbit is decided by the Jordan type.
    const auto ctx2 = context(2, 3, {0, 0});
    const auto rd0 = ResidueDatum::semisimple(ctx2.s);
    LieMatrix e12(2, 2);
    e12(0, 1) = 1;
    const auto rd_reg = ResidueDatum::make(ctx2.s, e12);
    ConnectionElement v = ConnectionElement::zero(2);
    v.N(0, 1) = WeightedPolynomial::constant(1);
    CHECK_FALSE(in_WA(v, rd0));
    CHECK(in_WA(v, rd_reg));
    ConnectionElement v2 = ConnectionElement::zero(2);
    v2.N(1, 0) = WeightedPolynomial::constant(5);
    CHECK(in_WA(v2, rd_reg));
    ConnectionElement v3 = ConnectionElement::zero(2);
    v3.N(0, 0) = WeightedPolynomial::constant(1);
    CHECK_FALSE(in_WA(v3, rd0));

    CHECK_THROWS_AS(ResidueDatum::make(ctx2.s, LieMatrix::identity(2)), InputError);
    LieMatrix off(3, 3);
    off(0, 1) = 1;
    CHECK_THROWS_AS(ResidueDatum::make(ctx.s, off), InputError);
}

TEST_CASE("gauge action of the (2,5) upper triangular element matches the closed form")
{
    const auto ctx = three_by_three();
    std::mt19937 rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        const Ex e = random_ex(rng);
        const Rational u = random_nonzero(rng), v = random_nonzero(rng), w = random_nonzero(rng);
        const Rational lam = random_rational(rng), a = random_rational(rng), b = random_rational(rng);

        GaugeWord g = GaugeWord::identity(3);
        g.g0(0, 0) = u;
        g.g0(1, 1) = v;
        g.g0(2, 2) = w;
        PolyMatrix m10(3), m11(3);
        m10(1, 2) = mono(2, 0, a / w) + mono(0, 5, b / w);
        m11(0, 2) = mono(1, 3, lam / w);
        g.factors = {m10, m11};

        PolyMatrix direct(3);
        direct(0, 0) = WeightedPolynomial::constant(u);
        direct(1, 1) = WeightedPolynomial::constant(v);
        direct(2, 2) = WeightedPolynomial::constant(w);
        direct(0, 2) = mono(1, 3, lam);
        direct(1, 2) = mono(2, 0, a) + mono(0, 5, b);
        CHECK(g.evaluate() == direct);

        const ConnectionElement out = gauge_act(g, connection(e), ctx);
        const Ex expect{v / u * e.C21,
                        u / v * e.C12,
                        v / w * e.C23 - lam * v / (u * w) * e.C21 - 10 * (a + b) / w,
                        u / w * e.C13a - a * u / (v * w) * e.C12 - 6 * lam / w,
                        u / w * e.C13b - b * u / (v * w) * e.C12 - 5 * lam / w,
                        u / w * e.N13,
                        v / w * e.N1,
                        v / w * e.N2};
        CHECK(out == connection(expect));
        CHECK(out.C(1, 0).coefficient({0, 1}) * out.C(0, 1).coefficient({0, 2}) == e.C21 * e.C12);
    }
}

TEST_CASE("gauge action properties on random words")
{
    for (const auto& ctx : {three_by_three(), context(2, 3, {6, 12}), context(3, 4, {0, 12, 24})}) {
        const auto u0 = U0_complex(ctx);
        std::mt19937 rng(19);
        for (int trial = 0; trial < 30; ++trial) {
            const GaugeWord g = random_word(u0, ctx, rng);
            const ConnectionElement w = random_connection(u0, ctx.n(), rng);
            const PolyMatrix gm = g.evaluate();
            const PolyMatrix gi = g.evaluate_inverse();
            CHECK(gm * gi == PolyMatrix::identity(ctx.n()));
            const ConnectionElement out = gauge_act(g, w, ctx);
            validate_connection(out, u0, ctx.n());
            // Curvature is conjugated.
            CHECK(curvature(out, ctx.params) == gm * curvature(w, ctx.params) * gi);
            // Residue is conjugated by the constant part.
            const LieMatrix g0inv = *inverse(g.g0);
            CHECK(residue(out) == g.g0 * residue(w) * g0inv);
        }
        CHECK(gauge_act(GaugeWord::identity(ctx.n()), ConnectionElement::zero(ctx.n()), ctx) ==
              ConnectionElement::zero(ctx.n()));
    }
}

TEST_CASE("the product C21 C12 is invariant under random words")
{
    const auto ctx = three_by_three();
    const auto u0 = U0_complex(ctx);
    std::mt19937 rng(23);
    for (int trial = 0; trial < 60; ++trial) {
        const Ex e = random_ex(rng);
        const ConnectionElement out = gauge_act(random_word(u0, ctx, rng), connection(e), ctx);
        CHECK(out.C(1, 0).coefficient({0, 1}) * out.C(0, 1).coefficient({0, 2}) == e.C21 * e.C12);
    }
}

TEST_CASE("gauge words are validated and truncation is guarded")
{
    const auto ctx = three_by_three();
    GaugeWord g = GaugeWord::identity(3);
    g.g0(0, 1) = 1;
    CHECK_THROWS_AS(validate_gauge_word(g, ctx), std::invalid_argument);
    g = GaugeWord::identity(3);
    g.g0(1, 1) = 0;
    CHECK_THROWS_AS(validate_gauge_word(g, ctx), std::invalid_argument);
    g = GaugeWord::identity(3);
    PolyMatrix mixed(3);
    mixed(1, 2) = mono(2, 0);
    mixed(0, 2) = mono(1, 3);
    g.factors = {mixed};
    CHECK_THROWS_AS(validate_gauge_word(g, ctx), std::invalid_argument);
    g.factors = {PolyMatrix::single(3, 1, 0, mono(0, 1))};
    CHECK_THROWS_AS(validate_gauge_word(g, ctx), std::invalid_argument);

    DglaContext tight = ctx;
    tight.w_max = 12;
    GaugeWord h = GaugeWord::identity(3);
    h.factors = {PolyMatrix::single(3, 0, 2, mono(1, 3))};
    CHECK_THROWS_AS(gauge_act(h, ConnectionElement::zero(3), tight), TruncationOverflow);
}

TEST_CASE("normalization into H^1")
{
    const auto ctx = three_by_three();
    const auto uc = u0_contraction(ctx);

    SUBCASE("an element of H^1 is left alone")
    {
        PolyMatrix gamma(3);
        gamma(1, 0) = mono(0, 1, 2);
        gamma(0, 2) = mono(2, 2, 3) + mono(0, 7, -3);
        const auto r = normalize_to_H1(gamma, ctx);
        CHECK(r.in_H1);
        CHECK(r.method == "already normal");
        CHECK(r.gamma == gamma);
        CHECK(r.word.factors.empty());
    }

    SUBCASE("an exact element is removed by one exponential")
    {
        const PolyMatrix u = PolyMatrix::single(3, 1, 2, mono(2, 0));
        const PolyMatrix gamma = apply_V(u, ctx.params);
        const auto r = normalize_to_H1(gamma, ctx);
        CHECK(r.in_H1);
        CHECK(r.gamma.is_zero());
        REQUIRE(r.word.factors.size() == 1);
        CHECK(r.word.factors[0] == u);
    }

    SUBCASE("generic C with C21 C12 != 110 reaches the H^1 branch")
    {
        std::mt19937 rng(29);
        for (int trial = 0; trial < 25; ++trial) {
            Ex e = random_ex(rng);
            e.C23 = random_nonzero(rng);
            e.N13 = e.N1 = e.N2 = 0;
            if (e.C21 * e.C12 == 110) continue;
            const PolyMatrix gamma = connection(e).C;
            const auto r = normalize_to_H1(gamma, ctx);
            REQUIRE(r.in_H1);
            CHECK(in_H1(r.gamma, uc));
            CHECK(r.gamma(1, 2).is_zero());
            CHECK(r.gamma(0, 2).coefficient({2, 2}) + r.gamma(0, 2).coefficient({0, 7}) == 0);
            CHECK(r.gamma(1, 0) == gamma(1, 0));
            CHECK(r.gamma(0, 1) == gamma(0, 1));
            // The recorded word reproduces the result.
            const auto replay = gauge_act(r.word, ConnectionElement{gamma, PolyMatrix(3)}, ctx);
            CHECK(replay.C == r.gamma);
            CHECK(replay.N.is_zero());
            // Idempotent.
            const auto again = normalize_to_H1(r.gamma, ctx);
            CHECK(again.method == "already normal");
            CHECK(again.gamma == r.gamma);
        }
    }

    SUBCASE("C21 C12 = 110 with an incompatible C23 cannot be normalized")
    {
        Ex e{11, 10, 1, 0, 0, 0, 0, 0};
        const auto r = normalize_to_H1(connection(e).C, ctx);
        CHECK_FALSE(r.in_H1);
        CHECK(r.method == "failed");
    }

    SUBCASE("a large-enough S needs only the sweep")
    {
        const auto big = context(2, 3, {0, 6, 12});
        const auto u0 = U0_complex(big);
        std::mt19937 rng(31);
        for (int trial = 0; trial < 10; ++trial) {
            Vector c(u0.basis1.size());
            for (auto& x : c) x = random_rational(rng);
            const auto r = normalize_to_H1(u0_matrix(c, u0.basis1, 3), big);
            CHECK(r.in_H1);
            CHECK(r.correction_rounds == 0);
        }
    }
}

TEST_CASE("parametric families of flat connections")
{
    const auto ctx = three_by_three();

    ParamFamily mb;
    mb.C = {{"y*E21", "110/s"}, {"y^2*E12", "s"}, {"x*y^4*E23", "c"}, {"x^2*y^2*E13", "d"}, {"y^7*E13", "e"}};
    mb.N = {{"x^2*E23", "12*n"}, {"y^5*E23", "10*n"}, {"x*y^3*E13", "-2*s*n"}};
    CHECK(mc_family_verify(mb, ctx).identically_zero);

    ParamFamily ma1;
    ma1.C = {{"y*E21", "a"}, {"x*y^4*E23", "c"}, {"x^2*y^2*E13", "d"}, {"y^7*E13", "e"}};
    ma1.N = {{"x^2*E23", "m"}, {"y^5*E23", "-m"}};
    CHECK(mc_family_verify(ma1, ctx).identically_zero);

    ParamFamily ma2;
    ma2.C = {{"y*E21*beta", "a"}, {"y^2*E12", "b"}, {"x*y^4*E23", "c"}, {"x^2*y^2*E13", "d"}, {"y^7*E13", "e"}};
    CHECK(mc_family_verify(ma2, ctx).identically_zero);

    CHECK(mc_family_verify(ParamFamily{}, ctx).identically_zero);

    ParamFamily bad = mb;
    bad.N["y^5*E23"] = "10*n + t";
    const auto report = mc_family_verify(bad, ctx);
    CHECK_FALSE(report.identically_zero);
    CHECK(report.residuals.count("x*y^4*E23") == 1);
    CHECK(report.residuals.at("x*y^4*E23") == ParamPoly::parse("10*t"));

    ParamFamily unknown;
    unknown.C = {{"y^3*E21", "1"}};
    CHECK_THROWS_AS(mc_family_verify(unknown, ctx), InputError);
    ParamFamily malformed;
    malformed.N = {{"x^2*E23", "n +"}};
    CHECK_THROWS_AS(mc_family_verify(malformed, ctx), InputError);
}

TEST_CASE("families agree with pointwise evaluation")
{
    const auto ctx = three_by_three();
    const auto rd = ResidueDatum::semisimple(ctx.s);
    std::mt19937 rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        const Rational s = random_nonzero(rng), n = random_rational(rng);
        const Ex e{110 / s, s, random_rational(rng), random_rational(rng), random_rational(rng), -2 * s * n, n, 11 * n};
        CHECK(mc_verify(connection(e), rd, ctx).flat);
    }
}

TEST_CASE("Q(A) data")
{
    SUBCASE("flag variety case has no H^1")
    {
        for (auto [p, q] : {std::pair{2, 3}, std::pair{2, 5}, std::pair{3, 4}}) {
            for (int n = 2; n <= 4; ++n) {
                std::vector<Rational> d;
                for (int k = 0; k < n; ++k) d.emplace_back(p * q * k);
                const DglaContext ctx{CurveParams(p, q), SemisimpleData(d)};
                const auto qa = qa_data(ResidueDatum::semisimple(ctx.s), ctx);
                CHECK(qa.h1_labels.empty());
                CHECK(qa.F_S.empty());
                CHECK(qa.nilradical.size() == static_cast<std::size_t>(n * (n - 1) / 2));
            }
        }
    }

    SUBCASE("(2,5), S = diag(0,1,11)")
    {
        const auto ctx = three_by_three();
        const auto qa = qa_data(ResidueDatum::semisimple(ctx.s), ctx);
        CHECK(qa.h1_labels == std::vector<std::string>{"y*E21", "y^2*E12", "y^2*f*E13"});
        CHECK(qa.h0_labels == std::vector<std::string>{"E11", "E22", "E33", "f*E23"});
        CHECK(qa.nilradical == std::vector<IndexPair>{{1, 2}});
        // [y^2 E12, f E23] = y^2 f E13.
        CHECK(qa.F_S[2](1, 3) == 1);
        // [y E21, E11] = y E21 and [y E21, E22] = -y E21.
        CHECK(qa.F_S[0](0, 0) == 1);
        CHECK(qa.F_S[0](0, 1) == -1);
    }

    SUBCASE("rank one")
    {
        const auto ctx = context(2, 3, {0});
        const auto qa = qa_data(ResidueDatum::semisimple(ctx.s), ctx);
        CHECK(qa.h1_labels.empty());
        CHECK(qa.h0_labels == std::vector<std::string>{"E11"});
        CHECK(qa.nilradical.empty());
    }
}

TEST_CASE("tangent complexes")
{
    SUBCASE("flag variety case at the origin, n = 2")
    {
        const auto ctx = context(2, 3, {6, 12});
        const auto rd = ResidueDatum::semisimple(ctx.s);
        const auto rep = tangent_report(ConnectionElement::zero(2), rd, ctx);
        CHECK(rep.finite.dims() == std::array<std::size_t, 3>{4, 3, 1});
        CHECK(rep.finite_dims == TangentDims{3, 1, 0});
        CHECK(rep.chain_condition);
        REQUIRE(rep.reduced_dims);
        CHECK(*rep.reduced_dims == TangentDims{3, 1, 0});
        CHECK(rep.quasi_isomorphic == true);
        CHECK(rep.big_agrees);
        CHECK_FALSE(rep.sign_convention.empty());
    }

    SUBCASE("rank one at zero")
    {
        const auto ctx = context(2, 3, {0});
        const auto rd = ResidueDatum::semisimple(ctx.s);
        CHECK(tangent_cohomology_dims(ConnectionElement::zero(1), rd, ctx) == TangentDims{1, 0, 0});
        const auto rep = tangent_report(ConnectionElement::zero(1), rd, ctx);
        CHECK(rep.big_agrees);
        CHECK(rep.quasi_isomorphic == true);
    }

    SUBCASE("pulled-back points (0, N) of the (2,5) example")
    {
        const auto ctx = three_by_three();
        const auto rd = ResidueDatum::semisimple(ctx.s);
        for (int k : {0, 1, -3}) {
            ConnectionElement w = ConnectionElement::zero(3);
            w.N(1, 2) = WeightedPolynomial::f_power(ctx.params, 1) * Rational(k);
            const auto rep = tangent_report(w, rd, ctx);
            CHECK(rep.chain_condition);
            REQUIRE(rep.quasi_isomorphic.has_value());
            CHECK(*rep.quasi_isomorphic);
            CHECK(rep.big_agrees);
        }
    }

    SUBCASE("a point on the extra component")
    {
        const auto ctx = three_by_three();
        const auto rd = ResidueDatum::semisimple(ctx.s);
        const Ex e{110, 1, 2, 3, 4, -2, 1, 11};
        const auto w = connection(e);
        REQUIRE(mc_verify(w, rd, ctx).flat);
        const auto rep = tangent_report(w, rd, ctx);
        CHECK(rep.chain_condition);
        CHECK_FALSE(rep.reduced.has_value());
        CHECK(rep.big_agrees);
    }

    SUBCASE("non-flat input is rejected")
    {
        const auto ctx = three_by_three();
        const auto rd = ResidueDatum::semisimple(ctx.s);
        const Ex e{0, 0, 0, 0, 0, 1, 0, 0};
        CHECK_THROWS_AS(tangent_complex(connection(e), rd, ctx), std::invalid_argument);
    }
}
