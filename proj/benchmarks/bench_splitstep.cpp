#include <benchmark/benchmark.h>

#include "atomfocus/constants.hpp"
#include "atomfocus/gpe.hpp"
#include "atomfocus/lattice.hpp"

using namespace atomfocus;

namespace {

gpe::Wavefunction packet(size_t nx, size_t ny, size_t nz) {
    auto wf = gpe::Wavefunction(gpe::Grid3::make(nx, ny, nz, 40e-6, 20e-6, 20e-6));
    const auto& g = wf.grid;
    for (size_t k = 0; k < g.nz; ++k)
        for (size_t j = 0; j < g.ny; ++j)
            for (size_t i = 0; i < g.nx; ++i) {
                const double r2 = g.x[i] * g.x[i] + g.y[j] * g.y[j] + g.z[k] * g.z[k];
                wf.psi[g.idx(i, j, k)] = std::exp(-r2 / (2.0 * 5e-6 * 5e-6));
            }
    wf.normalize(1e5);
    return wf;
}

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

void split_steps(benchmark::State& state, size_t nx, size_t ny, size_t nz) {
    auto wf = packet(nx, ny, nz);
    const auto sp = spec();
    gpe::BECConfig bec;
    gpe::PropagateOptions opt;
    opt.dt = 1e-6;
    for (auto _ : state) {
        const double t_end = wf.time + 16e-6;
        auto r = gpe::propagate(std::move(wf), sp, bec, t_end, opt);
        wf = std::move(r.psi);
        benchmark::DoNotOptimize(wf.psi.data());
    }
    state.SetItemsProcessed(state.iterations() * 16);
}

void BM_SplitStep2D(benchmark::State& state) { split_steps(state, 1024, 1, 64); }
void BM_SplitStep3D(benchmark::State& state) { split_steps(state, 128, 32, 64); }

} // namespace

BENCHMARK(BM_SplitStep2D)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SplitStep3D)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
