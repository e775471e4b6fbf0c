// Microbenchmarks for the hot paths: sampling, the tilt bisection, the
// Bernstein scan, series evaluation, coupled-path construction per strategy,
// and block partitioning. Items-processed counters are set where a
// per-element rate is the natural reading.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "kmt/blocks.hpp"
#include "kmt/bounds.hpp"
#include "kmt/coupling.hpp"
#include "kmt/distribution.hpp"
#include "kmt/regularity.hpp"

namespace {

void BM_sample_gaussian(benchmark::State& state) {
    const auto spec = kmt::DistributionSpec::centered_gaussian(1.0);
    const auto n = static_cast<std::size_t>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(kmt::sample(spec, n, seed++));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n));
}
BENCHMARK(BM_sample_gaussian)->Arg(1 << 10)->Arg(1 << 14);

void BM_sakhanenko_parameter(benchmark::State& state) {
    const auto spec = kmt::DistributionSpec::centered_laplace(0.5);
    for (auto _ : state)
        benchmark::DoNotOptimize(kmt::sakhanenko_parameter(spec));
}
BENCHMARK(BM_sakhanenko_parameter);

void BM_bernstein_scan(benchmark::State& state) {
    const auto spec = kmt::DistributionSpec::centered_gaussian(1.0);
    const int qmax = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(kmt::bernstein_scan(spec, qmax));
}
BENCHMARK(BM_bernstein_scan)->Arg(200)->Arg(400);

void BM_exponential_bound(benchmark::State& state) {
    const auto m = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(kmt::kmt_exponential_bound(0.5, 1.0, 10.0, m, 1.0));
}
BENCHMARK(BM_exponential_bound)->Arg(4)->Arg(65813);

void BM_couple_paths(benchmark::State& state, kmt::Strategy strategy) {
    const auto spec = kmt::DistributionSpec::rademacher();
    const auto K = static_cast<std::size_t>(state.range(0));
    std::uint64_t seed = 7;
    for (auto _ : state)
        benchmark::DoNotOptimize(kmt::couple_paths(spec, K, strategy, seed++));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(K));
}
BENCHMARK_CAPTURE(BM_couple_paths, independent, kmt::Strategy::independent)
    ->Arg(1 << 12);
BENCHMARK_CAPTURE(BM_couple_paths, per_variable_quantile,
                  kmt::Strategy::per_variable_quantile)
    ->Arg(1 << 12);
BENCHMARK_CAPTURE(BM_couple_paths, blockwise_sum_quantile,
                  kmt::Strategy::blockwise_sum_quantile)
    ->Arg(1 << 12);

void BM_block_partition(benchmark::State& state) {
    kmt::WeightSequence w;
    const auto H = static_cast<std::size_t>(state.range(0));
    w.u.resize(H);
    for (std::size_t k = 0; k < H; ++k) w.u[k] = 1.0 / ((k + 1.0) * (k + 1.0));
    for (auto _ : state) benchmark::DoNotOptimize(kmt::block_partition(w));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(H));
}
BENCHMARK(BM_block_partition)->Arg(1 << 10)->Arg(1 << 14);

}  // namespace

BENCHMARK_MAIN();
