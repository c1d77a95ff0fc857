#include <benchmark/benchmark.h>

#include "atomfocus/constants.hpp"
#include "atomfocus/lattice.hpp"
#include "atomfocus/rays.hpp"

using namespace atomfocus;

namespace {

lattice::LatticeSpec spec() {
    lattice::LatticeSpec s;
    s.lambda = 16.0 * phys::rb87_d2_defaults().lambda_res;
    s.sigma_z = 10e-6;
    s.delta_ang = phys::detuning_angular(200e9);
    s.z0 = 20e-6;
    s.v0 = 1e-2;
    const double e0 = 0.5 * s.species.mass * s.v0 * s.v0;
    s.I0 = lattice::peak_intensity_for_xi({5.37, e0}, s);
    return s;
}

void BM_TraceFull(benchmark::State& state) {
    const auto sp = spec();
    double x0 = 1e-6;
    for (auto _ : state) {
        auto t = rays::trace_full(x0, sp.z0, sp.v0, sp);
        benchmark::DoNotOptimize(t.back().x);
        x0 = x0 < 2e-6 ? x0 + 1e-9 : 1e-6;  // vary the launch point
    }
}

void BM_Deposit(benchmark::State& state) {
    const auto sp = spec();
    const auto n = static_cast<size_t>(state.range(0));
    const double quarter = sp.lambda / 4.0;
    for (auto _ : state) {
        auto d = rays::deposit(n, -quarter, quarter, 0.0, sp);
        benchmark::DoNotOptimize(d.fwhm);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

} // namespace

BENCHMARK(BM_TraceFull)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Deposit)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
