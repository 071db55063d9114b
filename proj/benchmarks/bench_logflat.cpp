#include "logflat/hpt.hpp"
#include "logflat/manin.hpp"
#include "logflat/moduli.hpp"
#include "logflat/wpoly.hpp"

#include <benchmark/benchmark.h>

using namespace logflat;

namespace {

DglaContext example()
{
    return DglaContext{CurveParams(2, 5), SemisimpleData({Rational(0), Rational(1), Rational(11)})};
}

ConnectionElement flat_point(const DglaContext& ctx)
{
    ParamFamily f;
    f.C = {{"y*E21", "110/s"}, {"y^2*E12", "s"}, {"x*y^4*E23", "c"}, {"x^2*y^2*E13", "d"}, {"y^7*E13", "e"}};
    f.N = {{"x^2*E23", "12*n"}, {"y^5*E23", "10*n"}, {"x*y^3*E13", "-2*s*n"}};
    return family_point(f, {{"s", 2}, {"c", 1}, {"d", -3}, {"e", Rational(1, 2)}, {"n", Rational(2, 3)}}, ctx);
}

void BM_WeightBasis(benchmark::State& state)
{
    const CurveParams cp(4, 7);
    for (auto _ : state)
        for (std::int64_t w = 0; w <= state.range(0); ++w) benchmark::DoNotOptimize(weight_basis(w, cp));
}
BENCHMARK(BM_WeightBasis)->Arg(100)->Arg(300);

void BM_MatrixMDeterminant(benchmark::State& state)
{
    const CurveParams cp(3, 5);
    for (auto _ : state)
        for (std::int64_t w = 0; w <= state.range(0); ++w)
            if (!cokernel_V_basis(w, cp).empty()) benchmark::DoNotOptimize(matrix_M_determinant(w, cp));
}
BENCHMARK(BM_MatrixMDeterminant)->Arg(100)->Arg(300);

void BM_U0Cohomology(benchmark::State& state)
{
    const DglaContext ctx = example();
    for (auto _ : state) benchmark::DoNotOptimize(cohomology_U0(ctx, U0_complex(ctx)));
}
BENCHMARK(BM_U0Cohomology);

void BM_GaugeAction(benchmark::State& state)
{
    const DglaContext ctx = example();
    const ConnectionElement w = flat_point(ctx);
    GaugeWord g = GaugeWord::identity(3);
    g.g0(0, 0) = 2;
    PolyMatrix u(3);
    u(1, 2) = WeightedPolynomial::monomial({2, 0}, 3) + WeightedPolynomial::monomial({0, 5}, -1);
    PolyMatrix v(3);
    v(0, 2) = WeightedPolynomial::monomial({1, 3}, Rational(1, 7));
    g.factors = {u, v};
    for (auto _ : state) benchmark::DoNotOptimize(gauge_act(g, w, ctx));
}
BENCHMARK(BM_GaugeAction);

void BM_Normalize(benchmark::State& state)
{
    const DglaContext ctx = example();
    PolyMatrix gamma(3);
    gamma(1, 0) = WeightedPolynomial::monomial({0, 1}, 2);
    gamma(0, 1) = WeightedPolynomial::monomial({0, 2}, 3);
    gamma(1, 2) = WeightedPolynomial::monomial({1, 4}, Rational(1, 2));
    gamma(0, 2) = WeightedPolynomial::monomial({2, 2}, -1) + WeightedPolynomial::monomial({0, 7}, 4);
    for (auto _ : state) benchmark::DoNotOptimize(normalize_to_H1(gamma, ctx));
}
BENCHMARK(BM_Normalize);

void BM_SliceContractionAndPerturb(benchmark::State& state)
{
    const DglaContext ctx = example();
    const ConnectionElement w = flat_point(ctx);
    DglaElement e = DglaElement::from_component(w.C, Form::Beta);
    e += DglaElement::from_component(w.N, Form::Alpha0);
    const auto bound = static_cast<int>(state.range(0));
    for (auto _ : state) {
        const SliceContraction sc = slice_contraction(ctx, slice_eigenvalues(ctx, -bound, bound));
        benchmark::DoNotOptimize(perturb(sc.contraction, slice_perturbation(sc, e)));
    }
}
BENCHMARK(BM_SliceContractionAndPerturb)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_TangentReport(benchmark::State& state)
{
    const DglaContext ctx = example();
    const ConnectionElement w = flat_point(ctx);
    const ResidueDatum rd = ResidueDatum::semisimple(ctx.s);
    for (auto _ : state) benchmark::DoNotOptimize(tangent_report(w, rd, ctx));
}
BENCHMARK(BM_TangentReport)->Unit(benchmark::kMillisecond);

void BM_VerifyManin(benchmark::State& state)
{
    const DglaContext ctx = example();
    for (auto _ : state) benchmark::DoNotOptimize(verify_manin(ctx.s, ctx.params));
}
BENCHMARK(BM_VerifyManin)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
