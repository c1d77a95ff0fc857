#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "atomfocus/profile.hpp"

using namespace atomfocus;

namespace {

struct Curve {
    std::vector<double> x, y;
};

Curve pseudo_voigt_curve(size_t n) {
    Curve c;
    const double fw = 0.5e-6, eta = 0.35;
    for (size_t i = 0; i < n; ++i) {
        const double x = (static_cast<double>(i) / (n - 1) - 0.5) * 4e-6;
        const double lor = 1.0 / (1.0 + 4.0 * x * x / (fw * fw));
        const double gau = std::exp(-4.0 * std::log(2.0) * x * x / (fw * fw));
        c.x.push_back(x);
        c.y.push_back(1200.0 * (eta * lor + (1.0 - eta) * gau) + 30.0);
    }
    return c;
}

void BM_FitGaussian(benchmark::State& state) {
    const auto c = pseudo_voigt_curve(200);
    for (auto _ : state) {
        auto r = profile::fit_gaussian(c.x, c.y);
        benchmark::DoNotOptimize(r.fwhm);
    }
}

void BM_FitPseudoVoigt(benchmark::State& state) {
    const auto c = pseudo_voigt_curve(200);
    for (auto _ : state) {
        auto r = profile::fit_pseudo_voigt(c.x, c.y);
        benchmark::DoNotOptimize(r.fwhm);
    }
}

} // namespace

BENCHMARK(BM_FitGaussian)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FitPseudoVoigt)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
