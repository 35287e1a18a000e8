#include <benchmark/benchmark.h>

#include "gmopg/inference.hpp"
#include "gmopg/properties.hpp"

using namespace gmopg;

namespace {

const GmopgParams kParams{2.0, 8.0, 5.0, BaselineSpec::exponential(0.5)};

void BM_pdf(benchmark::State& state) {
    double t = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(pdf(kParams, t));
        t = t < 4.0 ? t + 1e-3 : 0.1;
    }
}
BENCHMARK(BM_pdf);

void BM_quantile(benchmark::State& state) {
    double p = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(quantile(kParams, p));
        p = p < 0.99 ? p + 1e-3 : 0.01;
    }
}
BENCHMARK(BM_quantile);

void BM_log_likelihood(benchmark::State& state) {
    const auto data = sample(kParams, std::size_t(state.range(0)), 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(log_likelihood(kParams, data));
}
BENCHMARK(BM_log_likelihood)->Arg(72)->Arg(1000);

void BM_raw_moment(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(raw_moment(kParams, 2));
}
BENCHMARK(BM_raw_moment);

void BM_fit_exp(benchmark::State& state) {
    const auto data = sample(kParams, 72, 2);
    const auto cfg = default_config(ModelTag::Exp);
    for (auto _ : state) benchmark::DoNotOptimize(fit(data, cfg));
}
BENCHMARK(BM_fit_exp);

}  // namespace

BENCHMARK_MAIN();
