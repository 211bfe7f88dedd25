#include "retint/intervals.hpp"
#include "retint/kstest.hpp"
#include "retint/moments.hpp"
#include "retint/semodel.hpp"
#include "retint/synth.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_SeSample(benchmark::State& state) {
    const auto model = retint::SEModel::normalized(14.20, 0.38);
    for (auto _ : state) {
        benchmark::DoNotOptimize(retint::se_sample(model, static_cast<std::size_t>(state.range(0)), 1));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SeSample)->Arg(2000)->Arg(100000);

void BM_OneSampleKs(benchmark::State& state) {
    const auto model = retint::SEModel::normalized(14.20, 0.38);
    const auto x = retint::se_sample(model, static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(retint::one_sample_ks(x, model));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_OneSampleKs)->Arg(2000);

void BM_Bootstrap(benchmark::State& state) {
    const auto model = retint::SEModel::normalized(14.20, 0.38);
    const auto x = retint::se_sample(model, 2000, 3);
    retint::BootstrapOptions options;
    options.n_boot = 100;
    options.seed = 4;
    for (auto _ : state) benchmark::DoNotOptimize(retint::bootstrap_pvalue(x, model, options));
}
BENCHMARK(BM_Bootstrap)->Unit(benchmark::kMillisecond);

void BM_FitMle(benchmark::State& state) {
    const auto x = retint::se_sample(retint::SEModel::normalized(5.79, 0.43), 10000, 5);
    for (auto _ : state) benchmark::DoNotOptimize(retint::fit_mle(x));
}
BENCHMARK(BM_FitMle)->Unit(benchmark::kMillisecond);

void BM_ExtractIntervals(benchmark::State& state) {
    const auto v = retint::gen_iid_volatility(140000, 6);
    for (auto _ : state) benchmark::DoNotOptimize(retint::extract_intervals(v, 2.0));
    state.SetItemsProcessed(state.iterations() * 140000);
}
BENCHMARK(BM_ExtractIntervals);

void BM_MomentCurve(benchmark::State& state) {
    const auto v = retint::gen_iid_volatility(140000, 7);
    const auto grid = retint::default_q_grid();
    for (auto _ : state) benchmark::DoNotOptimize(retint::moment_curve(v, 2.0, grid));
}
BENCHMARK(BM_MomentCurve)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
