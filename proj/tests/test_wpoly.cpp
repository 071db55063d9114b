#include "doctest.h"
#include "oracles.hpp"

#include "logflat/wpoly.hpp"

using namespace logflat;

namespace {

const std::vector<std::pair<int, int>> kCurves = {{2, 3}, {2, 5}, {3, 4}, {3, 5}, {2, 7}, {4, 5}};

WeightedPolynomial mono(int a, int b, Rational c = 1) { return WeightedPolynomial::monomial({a, b}, c); }

std::vector<std::vector<Rational>> rows_of(const Matrix& m)
{
    std::vector<std::vector<Rational>> out;
    for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(m.row(r));
    return out;
}

}  // namespace

TEST_CASE("curve parameters are validated")
{
    CHECK_THROWS_AS(CurveParams(2, 4), InputError);
    CHECK_THROWS_AS(CurveParams(5, 2), InputError);
    CHECK_THROWS_AS(CurveParams(0, 3), InputError);
    CHECK_THROWS_WITH(CurveParams(3, 6), "p,q must be coprime");
    for (auto [p, q] : kCurves) CHECK(CurveParams(p, q).w0() == p * q - p - q);
}

TEST_CASE("weight decomposition matches exhaustive search")
{
    const CurveParams c25(2, 5);
    CHECK(weight_decompose(7, c25) == WeightIndex{7, 1, 1, 0});
    CHECK(weight_decompose(0, c25) == WeightIndex{0, 0, 0, 0});
    CHECK(weight_decompose(3, c25) == WeightIndex{3, 1, 4, -1});
    for (auto [p, q] : kCurves) {
        const CurveParams cp(p, q);
        for (int w = -40; w <= 120; ++w) {
            const auto o = oracle::decompose(w, p, q);
            const auto got = weight_decompose(w, cp);
            CHECK(got.a == o.a);
            CHECK(got.b == o.b);
            CHECK(got.c == o.c);
        }
    }
}

TEST_CASE("weight bases have the predicted size and order")
{
    const CurveParams c25(2, 5);
    CHECK(weight_basis(7, c25) == std::vector<Monomial>{{1, 1}});
    CHECK(weight_basis(10, c25) == std::vector<Monomial>{{2, 0}, {0, 5}});
    CHECK(weight_basis(3, c25).empty());
    for (auto [p, q] : kCurves) {
        const CurveParams cp(p, q);
        for (int w = 0; w <= 300; ++w) {
            const auto basis = weight_basis(w, cp);
            const auto brute = oracle::monomials_of_weight(w, p, q);
            const auto wi = weight_decompose(w, cp);
            REQUIRE(basis.size() == brute.size());
            CHECK(static_cast<std::int64_t>(basis.size()) == std::max<std::int64_t>(wi.c, -1) + 1);
            for (std::size_t k = 0; k < basis.size(); ++k) {
                CHECK(basis[k].x == brute[k].first);
                CHECK(basis[k].y == brute[k].second);
            }
        }
    }
}

TEST_CASE("E and V on sample polynomials")
{
    const CurveParams c25(2, 5);
    const auto f = WeightedPolynomial::f_power(c25, 1);
    CHECK(apply_E(mono(1, 1), c25) == mono(1, 1, 7));
    CHECK(apply_E(WeightedPolynomial::constant(1), c25).is_zero());
    CHECK(apply_E(f, c25) == Rational(10) * f);
    CHECK(apply_V(f, c25).is_zero());
    CHECK(apply_V(WeightedPolynomial::f_power(c25, 3), c25).is_zero());
    CHECK(apply_V(mono(1, 0), c25) == mono(0, 4, 5));
    CHECK(apply_V(mono(0, 1), c25) == mono(1, 0, 2));
}

TEST_CASE("V agrees with the termwise oracle and [E, V] = w0 V")
{
    for (auto [p, q] : kCurves) {
        const CurveParams cp(p, q);
        for (int a = 0; a < 6; ++a)
            for (int b = 0; b < 8; ++b) {
                WeightedPolynomial g = mono(a, b, Rational(a + 1, b + 2));
                g += mono(a + q, b, -3);
                const auto vg = apply_V(g, cp);
                oracle::Poly og;
                for (const auto& [m, c] : g.terms()) og[{m.x, m.y}] = c;
                oracle::Poly ov = oracle::apply_V(og, p, q);
                REQUIRE(vg.terms().size() == ov.size());
                for (const auto& [m, c] : vg.terms()) CHECK(ov[{m.x, m.y}] == c);
                const auto comm = apply_E(vg, cp) - apply_V(apply_E(g, cp), cp);
                CHECK(comm == Rational(cp.w0()) * vg);
            }
    }
}

TEST_CASE("V shifts weight by exactly w0")
{
    for (auto [p, q] : kCurves) {
        const CurveParams cp(p, q);
        for (int w = 0; w <= 80; ++w)
            for (const auto& m : weight_basis(w, cp)) {
                const auto vg = apply_V(WeightedPolynomial::monomial(m), cp);
                if (!vg.is_zero()) CHECK(vg.weight(cp) == w + cp.w0());
            }
    }
}

TEST_CASE("kernel of V is C[f]")
{
    const CurveParams c25(2, 5);
    REQUIRE(kernel_V(10, c25).size() == 1);
    CHECK(kernel_V(10, c25)[0] == WeightedPolynomial::f_power(c25, 1));
    CHECK(kernel_V(7, c25).empty());
    CHECK(kernel_V(0, c25) == std::vector{WeightedPolynomial::constant(1)});
    CHECK_THROWS(kernel_V(-1, c25));
    for (auto [p, q] : kCurves) {
        const CurveParams cp(p, q);
        for (int w = 0; w <= 200; ++w) {
            const Matrix v = V_matrix(w, cp);
            const std::size_t dim = weight_basis(w, cp).size();
            const std::size_t nullity = dim - oracle::rank(rows_of(v));
            CHECK(kernel_V(w, cp).size() == nullity);
            for (const auto& g : kernel_V(w, cp)) CHECK(apply_V(g, cp).is_zero());
        }
    }
}

TEST_CASE("cokernel representatives")
{
    const CurveParams c25(2, 5);
    CHECK(cokernel_V_basis(2, c25) == std::vector{mono(0, 1)});
    CHECK(cokernel_V_basis(14, c25) == std::vector{WeightedPolynomial::f_power(c25, 1) * mono(0, 2)});
    CHECK(cokernel_V_basis(5, c25).empty());
    for (auto [p, q] : kCurves) {
        const CurveParams cp(p, q);
        for (int w = 0; w <= 200; ++w) {
            const std::size_t target = weight_basis(w, cp).size();
            const std::size_t image = w - cp.w0() >= 0 ? oracle::rank(rows_of(V_matrix(w - cp.w0(), cp))) : 0;
            const auto reps = cokernel_V_basis(w, cp);
            CHECK(reps.size() == target - image);
            if (!reps.empty()) {
                // representative plus image spans O_w
                CHECK(oracle::rank(rows_of(matrix_M(w, cp))) == target);
            }
        }
    }
}

TEST_CASE("determinant of M is positive wherever defined")
{
    const CurveParams c25(2, 5);
    CHECK(matrix_M_determinant(2, c25) == 1);
    CHECK(matrix_M_determinant(12, c25) > 0);
    CHECK(matrix_M_determinant(22, c25) > 0);
    CHECK_THROWS_AS(matrix_M_determinant(5, c25), std::domain_error);
    for (auto [p, q] : kCurves) {
        const CurveParams cp(p, q);
        for (int w = 0; w <= 150; ++w) {
            if (cokernel_V_basis(w, cp).empty()) continue;
            CHECK(matrix_M_determinant(w, cp) > 0);
        }
    }
}
