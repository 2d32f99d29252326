#include "codafin/simulate/rng.hpp"
#include "codafin/stats/descriptive.hpp"
#include "codafin/stats/heteroscedasticity.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

using namespace codafin;

std::vector<double> lognormal_sample(std::size_t n) {
    sim::Rng rng(9);
    std::vector<double> v(n);
    for (auto& x : v) x = std::exp(rng.normal());
    return v;
}

void BM_TukeyOutliers(benchmark::State& state) {
    const auto v = lognormal_sample(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(stats::tukey_outliers(v));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TukeyOutliers)->Range(1 << 8, 1 << 16);

void BM_BreuschPagan(benchmark::State& state) {
    const auto e = lognormal_sample(static_cast<std::size_t>(state.range(0)));
    const auto f = lognormal_sample(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(stats::breusch_pagan(e, f));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BreuschPagan)->Range(1 << 8, 1 << 16);

}  // namespace
