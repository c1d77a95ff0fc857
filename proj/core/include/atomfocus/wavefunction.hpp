#pragma once
#include <complex>
#include <memory>
#include <vector>

#include "atomfocus/fft.hpp"
#include "atomfocus/grid.hpp"

namespace atomfocus::gpe {

// Complex field on a Grid3, normalized to the atom number: ∫|ψ|² dV = N,
// so |ψ|² is atom density and u|ψ|² is the mean-field term directly.
struct Wavefunction {
    Grid3 grid;
    std::vector<std::complex<double>> psi;
    double time = 0.0;

    Wavefunction() = default;
    explicit Wavefunction(Grid3 g) : grid(std::move(g)), psi(grid.size()) {}

    // copies drop the FFT plan (it is bound to the source buffer); moves keep it
    Wavefunction(const Wavefunction& o) : grid(o.grid), psi(o.psi), time(o.time) {}
    Wavefunction& operator=(const Wavefunction& o) {
        if (this != &o) { grid = o.grid; psi = o.psi; time = o.time; fft_.reset(); }
        return *this;
    }
    Wavefunction(Wavefunction&&) noexcept = default;
    Wavefunction& operator=(Wavefunction&&) noexcept = default;

    double norm() const;              // ∫|ψ|² dV
    void normalize(double n_atoms);   // rescale so norm() == n_atoms

    // lazily planned in-place FFT bound to this->psi
    Fft3& fft(int n_threads = 1) const;

private:
    mutable std::unique_ptr<Fft3> fft_;
};

// y-integrated column density n₂(x,z) = ∫|ψ|² dy [atoms/m²], row-major with
// x fastest: value(i,k) at i + nx*k.
std::vector<double> column_density_xz(const Wavefunction& wf);

// |ψ̃(k)|² as atoms per reciprocal-space cell (sums to N, Parseval-exact).
// Same index layout as psi, DFT k-ordering. Destroys nothing: works on a copy.
std::vector<double> momentum_cells(const Wavefunction& wf);

struct VelocityProfile {
    std::vector<double> v;       // velocity axis [m/s], ascending
    std::vector<double> weight;  // atoms per cell (marginal) or density cut [arb]
};

// Marginal distributions along x and z: sum of momentum_cells over the other
// two axes, velocity axis v = ħk/m (+ axis_shift for a co-moving relabel).
// Each marginal sums to N.
std::pair<VelocityProfile, VelocityProfile>
velocity_marginals(const Wavefunction& wf, double mass, double shift_vz = 0.0);

// 1D cuts through the peak of the 3D momentum density along x and z — the
// profile-through-the-maximum reading of a momentum-space map.
std::pair<VelocityProfile, VelocityProfile>
velocity_peak_cuts(const Wavefunction& wf, double mass, double shift_vz = 0.0);

} // namespace atomfocus::gpe
