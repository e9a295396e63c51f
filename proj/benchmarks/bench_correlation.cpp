#include "prach/correlation.hpp"
#include "prach/zadoff_chu.hpp"

#include <benchmark/benchmark.h>

using namespace prach;

static void BM_CircCorrDirect(benchmark::State& st)
{
    const int len = static_cast<int>(st.range(0));
    const auto x = zc_root(1, len);
    const auto y = cyclic_shift(x, 7);
    for (auto _ : st)
        benchmark::DoNotOptimize(circ_corr(x.samples, y.samples));
}
BENCHMARK(BM_CircCorrDirect)->Arg(139)->Arg(839);

static void BM_CircCorrDft(benchmark::State& st)
{
    const int len = static_cast<int>(st.range(0));
    const auto x = zc_root(1, len);
    const auto y = cyclic_shift(x, 7);
    for (auto _ : st)
        benchmark::DoNotOptimize(circ_corr_dft(x.samples, y.samples));
}
BENCHMARK(BM_CircCorrDft)->Arg(139)->Arg(839);

static void BM_ClosedFormCfo(benchmark::State& st)
{
    const int len = static_cast<int>(st.range(0));
    for (auto _ : st)
        benchmark::DoNotOptimize(closed_form_cfo_corr(51, 10, 0.3, 51, len));
}
BENCHMARK(BM_ClosedFormCfo)->Arg(139)->Arg(839);
