#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "atomfocus/profile.hpp"

using namespace atomfocus;

namespace {

std::vector<double> samples(size_t n) {
    std::mt19937 rng(7);
    std::normal_distribution<double> d(0.0, 1e-6);
    std::vector<double> out(n);
    for (auto& v : out) v = d(rng);
    return out;
}

void BM_Kde(benchmark::State& state) {
    const auto xs = samples(static_cast<size_t>(state.range(0)));
    for (auto _ : state) {
        auto r = profile::kde(xs);
        benchmark::DoNotOptimize(r.fwhm);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

} // namespace

BENCHMARK(BM_Kde)->Arg(5000)->Arg(20000)->Arg(62400)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
