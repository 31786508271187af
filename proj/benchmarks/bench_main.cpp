#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "matsch/hstransform.hpp"
#include "matsch/interpolate.hpp"
#include "matsch/kernels.hpp"
#include "matsch/schoenberg.hpp"
#include "matsch/specfun.hpp"

using namespace matsch;

namespace {

PointSet jittered(int side, int seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    Eigen::MatrixXd c(side * side, 2);
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j) c.row(i * side + j) << i + u(rng), j + u(rng);
    return PointSet(c);
}

void BM_BesselK(benchmark::State& st) {
    const double a = static_cast<double>(st.range(0)) / 10.0;
    double z = 0.05;
    for (auto _ : st) {
        benchmark::DoNotOptimize(bessel_k(a, z));
        z = z > 40 ? 0.05 : z * 1.07;
    }
}
BENCHMARK(BM_BesselK)->Arg(3)->Arg(10)->Arg(47);

void BM_OmegaLambda(benchmark::State& st) {
    double t = 0.1;
    for (auto _ : st) {
        benchmark::DoNotOptimize(omega(0.75, t));
        t = t > 200 ? 0.1 : t * 1.05;
    }
}
BENCHMARK(BM_OmegaLambda);

void BM_ForwardTransform(benchmark::State& st) {
    const RadialDensity nu = binomial_representing_density(1.0, 0.5);
    for (auto _ : st) benchmark::DoNotOptimize(hs_forward_at(nu, 0.5, 2.0));
}
BENCHMARK(BM_ForwardTransform)->Unit(benchmark::kMillisecond);

void BM_FAlphaLambdaEval(benchmark::State& st) {
    const KernelSpec k = KernelSpec::f_alpha_lambda(0.75, 0.75, 3);
    for (auto _ : st) benchmark::DoNotOptimize(kernel_eval(k, 1.0));
}
BENCHMARK(BM_FAlphaLambdaEval)->Unit(benchmark::kMicrosecond);

void BM_Assemble(benchmark::State& st) {
    const PointSet x = jittered(static_cast<int>(st.range(0)), 1);
    const KernelSpec k = KernelSpec::matern_norm(1.5, 2);
    for (auto _ : st) benchmark::DoNotOptimize(assemble(k, x).entries.data());
    st.SetComplexityN(x.size());
}
BENCHMARK(BM_Assemble)->Arg(10)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_Certify(benchmark::State& st) {
    const PointSet x = jittered(static_cast<int>(st.range(0)), 2);
    const KernelSpec k = KernelSpec::matern_norm(1.0, 2);
    for (auto _ : st) benchmark::DoNotOptimize(certify(k, x).spectral.lambda_min);
}
BENCHMARK(BM_Certify)->Arg(10)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_SolveLagrange(benchmark::State& st) {
    const PointSet x = jittered(static_cast<int>(st.range(0)), 3);
    const SchoenbergMatrixView s = assemble(KernelSpec::imq(2.0, 2), x);
    for (auto _ : st) benchmark::DoNotOptimize(solve_lagrange(s).solve_residual);
}
BENCHMARK(BM_SolveLagrange)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
