#include "atomfocus/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "atomfocus/constants.hpp"

namespace atomfocus::gpe {

double Wavefunction::norm() const {
    double s = 0.0;
    for (const auto& a : psi) s += std::norm(a);
    return s * grid.dV();
}

void Wavefunction::normalize(double n_atoms) {
    const double n = norm();
    if (n <= 0.0) throw std::runtime_error("normalize: zero-norm state");
    const double f = std::sqrt(n_atoms / n);
    for (auto& a : psi) a *= f;
}

Fft3& Wavefunction::fft(int n_threads) const {
    if (!fft_) fft_ = std::make_unique<Fft3>(grid, const_cast<std::complex<double>*>(psi.data()),
                                             n_threads);
    return *fft_;
}

std::vector<double> column_density_xz(const Wavefunction& wf) {
    const auto& g = wf.grid;
    std::vector<double> n2(g.nx * g.nz, 0.0);
    for (std::size_t k = 0; k < g.nz; ++k)
        for (std::size_t j = 0; j < g.ny; ++j) {
            const std::size_t base = g.idx(0, j, k);
            double* out = n2.data() + k * g.nx;
            const auto* in = wf.psi.data() + base;
            for (std::size_t i = 0; i < g.nx; ++i) out[i] += std::norm(in[i]);
        }
    for (auto& v : n2) v *= g.dy;
    return n2;
}

std::vector<double> momentum_cells(const Wavefunction& wf) {
    Wavefunction tmp(wf);
    tmp.fft().forward();
    const double w = wf.grid.dV() / static_cast<double>(wf.grid.size());
    std::vector<double> cells(wf.grid.size());
    for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = std::norm(tmp.psi[i]) * w;
    return cells;
}

namespace {

// permutation that sorts a DFT-ordered k axis ascending
std::vector<std::size_t> k_order(const std::vector<double>& k) {
    std::vector<std::size_t> ord(k.size());
    for (std::size_t i = 0; i < ord.size(); ++i) ord[i] = i;
    std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) { return k[a] < k[b]; });
    return ord;
}

VelocityProfile sorted_profile(const std::vector<double>& k, const std::vector<double>& w,
                               double mass, double shift, double hbar) {
    auto ord = k_order(k);
    VelocityProfile p;
    p.v.resize(k.size());
    p.weight.resize(k.size());
    for (std::size_t i = 0; i < ord.size(); ++i) {
        p.v[i] = hbar * k[ord[i]] / mass + shift;
        p.weight[i] = w[ord[i]];
    }
    return p;
}

constexpr double kHbar = phys::hbar;

} // namespace

std::pair<VelocityProfile, VelocityProfile>
velocity_marginals(const Wavefunction& wf, double mass, double shift_vz) {
    const auto cells = momentum_cells(wf);
    const auto& g = wf.grid;
    std::vector<double> mx(g.nx, 0.0), mz(g.nz, 0.0);
    for (std::size_t k = 0; k < g.nz; ++k)
        for (std::size_t j = 0; j < g.ny; ++j) {
            const auto* row = cells.data() + g.idx(0, j, k);
            double srow = 0.0;
            for (std::size_t i = 0; i < g.nx; ++i) {
                mx[i] += row[i];
                srow += row[i];
            }
            mz[k] += srow;
        }
    return {sorted_profile(g.kx, mx, mass, 0.0, kHbar),
            sorted_profile(g.kz, mz, mass, shift_vz, kHbar)};
}

std::pair<VelocityProfile, VelocityProfile>
velocity_peak_cuts(const Wavefunction& wf, double mass, double shift_vz) {
    const auto cells = momentum_cells(wf);
    const auto& g = wf.grid;
    const std::size_t ipk = std::max_element(cells.begin(), cells.end()) - cells.begin();
    const std::size_t pi = ipk % g.nx;
    const std::size_t pj = (ipk / g.nx) % g.ny;
    const std::size_t pk = ipk / (g.nx * g.ny);
    std::vector<double> cx(g.nx), cz(g.nz);
    for (std::size_t i = 0; i < g.nx; ++i) cx[i] = cells[g.idx(i, pj, pk)];
    for (std::size_t k = 0; k < g.nz; ++k) cz[k] = cells[g.idx(pi, pj, k)];
    return {sorted_profile(g.kx, cx, mass, 0.0, kHbar),
            sorted_profile(g.kz, cz, mass, shift_vz, kHbar)};
}

} // namespace atomfocus::gpe
