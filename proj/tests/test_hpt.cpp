#include "doctest.h"

#include "logflat/hpt.hpp"

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

Term term(int a, int b, std::size_t i, std::size_t j, Form f) { return Term{{a, b}, i, j, f}; }

const IdentityCheck& find(const ContractionReport& r, const std::string& name)
{
    for (const auto& c : r.checks)
        if (c.name == name) return c;
    throw std::runtime_error("no check named " + name);
}

/// C21 y E21 beta + C13 y^2 f E13 beta + N1 f E23 alpha0: flat for every choice
/// of the three coefficients (V(f) = 0 and the brackets vanish).
DglaElement flat_point(const DglaContext& ctx, Rational c21, Rational c13, Rational n1)
{
    DglaElement w(1);
    w.add(term(0, 1, 1, 0, Form::Beta), c21);
    const auto f = WeightedPolynomial::f_power(ctx.params, 1);
    const auto y2f = f * WeightedPolynomial::monomial({0, 2});
    for (const auto& [m, c] : y2f.terms()) w.add(Term{m, 0, 2, Form::Beta}, c13 * c);
    for (const auto& [m, c] : f.terms()) w.add(Term{m, 1, 2, Form::Alpha0}, n1 * c);
    return w;
}

/// Small hand-built contraction: big = span(e1, e2) -> span(f1, f2), d e1 = f1.
Contraction toy()
{
    const Dims big{2, 2}, small{1, 1};
    Contraction c;
    c.big = Complex{big, GradedMap(big, big, 1)};
    c.big.d.block(0)(0, 0) = 1;
    c.small = Complex::zero_differential(small);
    c.a = GradedMap(small, big, 0);
    c.a.block(0)(1, 0) = 1;
    c.a.block(1)(1, 0) = 1;
    c.b = GradedMap(big, small, 0);
    c.b.block(0)(0, 1) = 1;
    c.b.block(1)(0, 1) = 1;
    c.h = GradedMap(big, big, -1);
    c.h.block(1)(0, 0) = 1;
    return c;
}

}  // namespace

TEST_CASE("identity contraction")
{
    const Dims dims{2, 3, 1};
    Contraction c;
    c.small = Complex::zero_differential(dims);
    c.big = Complex::zero_differential(dims);
    c.a = GradedMap::identity(dims);
    c.b = GradedMap::identity(dims);
    c.h = GradedMap(dims, dims, -1);
    const auto r = verify_contraction(c);
    CHECK(r.all_pass());
    CHECK(r.checks.size() == 9);
}

TEST_CASE("shape mismatch is rejected")
{
    auto c = toy();
    c.a = GradedMap(Dims{1, 1}, Dims{2, 3}, 0);
    CHECK_THROWS_AS(verify_contraction(c), std::invalid_argument);
}

TEST_CASE("hand-built contraction and its perturbation")
{
    const auto c = toy();
    CHECK(verify_contraction(c).all_pass());

    GradedMap t(c.big.dims, c.big.dims, 1);
    t.block(0)(0, 1) = 3;  // e2 -> 3 f1
    t.block(0)(1, 1) = 2;  // e2 -> 2 f2
    const auto p = perturb(c, t);
    CHECK(verify_contraction(p.contraction).all_pass());
    CHECK(p.contraction.big.d == c.big.d + t);
    CHECK(p.contraction.small.d.block(0)(0, 0) == 2);
    CHECK(p.exponent == 2);
}

TEST_CASE("random nilpotent perturbations of the hand-built contraction")
{
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> dist(-3, 3);
    const auto c = toy();
    for (int trial = 0; trial < 30; ++trial) {
        GradedMap t(c.big.dims, c.big.dims, 1);
        t.block(0)(0, 1) = dist(rng);
        t.block(0)(1, 0) = dist(rng);
        t.block(0)(1, 1) = dist(rng);
        // d + t must square to zero; degree 1 maps into nothing so any t works
        try {
            const auto p = perturb(c, t);
            CHECK(verify_contraction(p.contraction).all_pass());
        } catch (const std::domain_error&) {
            // h t = [[t10, t11], [0, 0]] on degree 0 is nilpotent iff t10 = 0
            CHECK(t.block(0)(1, 0) != 0);
        }
    }
}

TEST_CASE("removing the homotopy is detected")
{
    const auto ctx = three_by_three();
    auto sc = slice_contraction(ctx, slice_eigenvalues(ctx, -12, 12));
    REQUIRE(verify_contraction(sc.contraction).all_pass());
    sc.contraction.h = GradedMap(sc.contraction.big.dims, sc.contraction.big.dims, -1);
    const auto r = verify_contraction(sc.contraction);
    const auto& homotopy = find(r, "d h + h d = id - a b");
    CHECK(!homotopy.pass);
    CHECK(homotopy.degree.has_value());
    CHECK(homotopy.column.has_value());
    CHECK(find(r, "h h = 0").pass);
}

TEST_CASE("slice contractions pass on several data sets")
{
    for (const auto& ctx : {three_by_three(), context(2, 3, {0, 6}), context(3, 4, {0, 2, 5}), context(2, 3, {0, 1})}) {
        const auto sc = slice_contraction(ctx, slice_eigenvalues(ctx, -15, 25));
        CHECK(verify_contraction(sc.contraction).all_pass());
    }
}

TEST_CASE("zero perturbation changes nothing")
{
    const auto ctx = three_by_three();
    const auto sc = slice_contraction(ctx, slice_eigenvalues(ctx, -6, 6));
    const auto p = perturb(sc.contraction, slice_perturbation(sc, DglaElement(1)));
    CHECK(p.contraction.a == sc.contraction.a);
    CHECK(p.contraction.b == sc.contraction.b);
    CHECK(p.contraction.h == sc.contraction.h);
    CHECK(p.contraction.small.d == sc.contraction.small.d);
    CHECK(p.series_terms == 0);
}

TEST_CASE("perturbation by a flat connection")
{
    const auto ctx = three_by_three();
    const auto w = flat_point(ctx, 2, Rational(-1, 3), 5);
    // Maurer-Cartan: delta_S w + [w, w]/2 = 0
    CHECK((delta_S(w, ctx) + Rational(1, 2) * bracket(w, w)).is_zero());

    const auto sc = slice_contraction(ctx, slice_eigenvalues(ctx, -12, 16));
    const auto t = slice_perturbation(sc, w);
    const auto p = perturb(sc.contraction, t);
    CHECK(verify_contraction(p.contraction).all_pass());
    CHECK(p.contraction.a == sc.contraction.a);
    CHECK(p.contraction.b == sc.contraction.b);
    CHECK(p.contraction.big.d == sc.contraction.big.d + t);

    // h' vanishes on U and lands in U
    std::size_t pos = 0;
    for (std::size_t s = 0; s < sc.slices.size(); ++s) {
        for (int k = 1; k < 3; ++k) {
            const auto& sl = sc.slices[s];
            for (std::size_t i = 0; i < sl.dim(k); ++i) {
                const Form f = sl.basis(k)[i].form;
                const std::size_t col = sc.offsets[s][static_cast<std::size_t>(k)] + i;
                const Vector image = p.contraction.h.block(k).column(col);
                if (f == Form::Beta) CHECK(is_zero(image));
                // images are in degree k-1; check their forms
                for (std::size_t s2 = 0; s2 < sc.slices.size(); ++s2) {
                    const auto& sl2 = sc.slices[s2];
                    for (std::size_t r = 0; r < sl2.dim(k - 1); ++r) {
                        const Form g = sl2.basis(k - 1)[r].form;
                        if (g == Form::Alpha0 || g == Form::Alpha0Beta)
                            CHECK(image[sc.offsets[s2][static_cast<std::size_t>(k - 1)] + r] == 0);
                    }
                }
            }
        }
        ++pos;
    }
}

TEST_CASE("U_0 contraction of the three-by-three example")
{
    const auto ctx = three_by_three();
    const auto uc = u0_contraction(ctx);
    CHECK(uc.contraction.small.dims == Dims{4, 3});
    CHECK(uc.contraction.big.dims == Dims{6, 5});
    CHECK(verify_contraction(uc.contraction).all_pass());

    // h has weight -w0
    const auto& h = uc.contraction.h.block(1);
    for (std::size_t c = 0; c < h.cols(); ++c)
        for (std::size_t r = 0; r < h.rows(); ++r) {
            if (h(r, c) == 0) continue;
            CHECK(uc.u0.basis0[r].mono.weight(ctx.params) == uc.u0.basis1[c].mono.weight(ctx.params) - ctx.params.w0());
        }

    // perturbing by a cohomology class: a unchanged, small differential is ad_gamma
    for (std::size_t k = 0; k < uc.cohomology.h1.size(); ++k) {
        const auto& cls = uc.cohomology.h1[k];
        const auto gamma = PolyMatrix::single(3, cls.i, cls.j, cls.polynomial(ctx.params));
        const auto t = u0_perturbation(uc.u0, gamma);
        const auto p = perturb(uc.contraction, t);
        CHECK(verify_contraction(p.contraction).all_pass());
        CHECK(p.contraction.a == uc.contraction.a);
        const Matrix ad_on_h = t.block(0) * uc.contraction.a.block(0);
        CHECK(uc.contraction.a.block(1) * p.contraction.small.d.block(0) == ad_on_h);
    }
}

TEST_CASE("U_0 contraction when H^1 vanishes and in the trivial case")
{
    {
        const auto ctx = context(2, 3, {6, 12, 18});
        const auto uc = u0_contraction(ctx);
        CHECK(uc.contraction.small.dims[1] == 0);
        CHECK(verify_contraction(uc.contraction).all_pass());
        // h inverts delta on U_0^1
        CHECK(uc.contraction.big.d.block(0) * uc.contraction.h.block(1) == Matrix::identity(uc.u0.basis1.size()));
    }
    {
        const auto ctx = context(2, 3, {0});
        const auto uc = u0_contraction(ctx);
        CHECK(uc.contraction.small.dims == Dims{1, 0});
        CHECK(uc.contraction.big.dims == Dims{1, 0});
        CHECK(verify_contraction(uc.contraction).all_pass());
    }
}
