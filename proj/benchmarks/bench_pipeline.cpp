#include "prach/prach.hpp"

#include <benchmark/benchmark.h>

using namespace prach;

namespace {

Scenario c0(int n_ant)
{
    Scenario s;
    s.id = "bench";
    s.format = PrachFormat::by_name("C0");
    s.roots = {51, 138};
    s.devices = {{51, 2, 0.3, "target"}, {138, 5, 0.3, "interferer"}};
    s.n_ant = n_ant;
    s.snr_db = {-10.0, 0.0};
    return s;
}

} // namespace

// occasions per second through channel, correlator, combiner and detectors
static void BM_RunOccasions(benchmark::State& st)
{
    RunPlan plan;
    plan.scenario = c0(static_cast<int>(st.range(0)));
    plan.configs = {{DetectorKind::baseline, Combiner::pc}, {DetectorKind::cfo_aware, Combiner::pc}};
    plan.occasions = 2000;
    plan.analytic = false;
    for (auto _ : st)
        benchmark::DoNotOptimize(run(plan));
    st.SetItemsProcessed(st.iterations() * plan.occasions * static_cast<long>(plan.scenario.snr_db.size()));
}
BENCHMARK(BM_RunOccasions)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_DetectCfoAware(benchmark::State& st)
{
    const Scenario s = c0(1);
    const auto t = cfo_thresholds(s, -6.0);
    const InterferenceModel model = InterferenceModel::nominal(s);
    const auto p = make_cfo_params(s, t, &model);
    Rng rng = make_stream(1, StreamPurpose::test, 0);
    const auto ch = draw_channel(s, rng);
    PsiSet psi;
    for (int u : s.roots)
        psi.push_back(combine_pc(correlate(assemble_received(s, ch, -6.0, rng), u)).psi);
    DetectionReport rep;
    for (auto _ : st) {
        detect_cfo_aware(psi, p, rep);
        benchmark::DoNotOptimize(rep);
    }
}
BENCHMARK(BM_DetectCfoAware);

static void BM_PredictedPfaCfo(benchmark::State& st)
{
    const Scenario s = c0(1);
    const auto t = cfo_thresholds(s, -6.0);
    for (auto _ : st)
        benchmark::DoNotOptimize(predicted_pfa_cfo(s, t, st.range(0), 3));
}
BENCHMARK(BM_PredictedPfaCfo)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
