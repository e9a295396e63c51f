#include "prach/specfun.hpp"

#include <benchmark/benchmark.h>

using namespace prach;

static void BM_UpperIncGamma(benchmark::State& st)
{
    const double a = static_cast<double>(st.range(0));
    double x = 0.5;
    for (auto _ : st) {
        benchmark::DoNotOptimize(upper_inc_gamma_reg(a, x));
        x = x < 60.0 ? x * 1.01 : 0.5;
    }
}
BENCHMARK(BM_UpperIncGamma)->Arg(1)->Arg(8)->Arg(96);

static void BM_InvUpperIncGamma(benchmark::State& st)
{
    const double a = static_cast<double>(st.range(0));
    for (auto _ : st)
        benchmark::DoNotOptimize(inv_upper_inc_gamma_reg(a, 3.5989155871378808e-06));
}
BENCHMARK(BM_InvUpperIncGamma)->Arg(1)->Arg(8)->Arg(96);

static void BM_MarcumQ(benchmark::State& st)
{
    const double m = static_cast<double>(st.range(0));
    for (auto _ : st)
        benchmark::DoNotOptimize(marcum_q(2.0, std::sqrt(m), std::sqrt(m + 4.0)));
}
BENCHMARK(BM_MarcumQ)->Arg(1)->Arg(100)->Arg(10000);

static void BM_MixCcdfSeries(benchmark::State& st)
{
    const GeneralizedChiSquareMix d{12, 4, 0.2, 2.0};
    for (auto _ : st)
        benchmark::DoNotOptimize(mix_ccdf(d, 4.0 * d.mean()));
}
BENCHMARK(BM_MixCcdfSeries);

static void BM_MixCcdfQuadrature(benchmark::State& st)
{
    const GeneralizedChiSquareMix d{12, 4, 1e-4, 5e4};
    for (auto _ : st)
        benchmark::DoNotOptimize(mix_ccdf(d, 4.0 * d.mean()));
}
BENCHMARK(BM_MixCcdfQuadrature);
