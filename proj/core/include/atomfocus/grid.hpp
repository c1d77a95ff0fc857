#pragma once
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace atomfocus::gpe {

// Uniform centered grid. x is the fastest-varying index
// (idx = i + nx*(j + ny*k)), which matches both the snapshot byte layout and
// FFTW's row-major (nz, ny, nx) plan order.
struct Grid3 {
    std::size_t nx = 0, ny = 0, nz = 0;
    double Lx = 0, Ly = 0, Lz = 0;
    double dx = 0, dy = 0, dz = 0;
    std::vector<double> x, y, z;     // centered axes: (i - n/2) * d
    std::vector<double> kx, ky, kz;  // DFT ordering (0.., then negative)

    // counts must be powers of two (1 allowed: collapsed axis for 2D mode)
    static Grid3 make(std::size_t nx, std::size_t ny, std::size_t nz, double Lx,
                      double Ly, double Lz, std::size_t max_points = (1ull << 26)) {
        auto pow2 = [](std::size_t n) { return n && (n & (n - 1)) == 0; };
        if (!pow2(nx) || !pow2(ny) || !pow2(nz))
            throw std::invalid_argument("Grid3: counts must be powers of two");
        if (nx * ny * nz > max_points)
            throw std::invalid_argument("Grid3: " + std::to_string(nx * ny * nz) +
                                        " points exceeds the memory budget of " +
                                        std::to_string(max_points));
        if (Lx <= 0 || Ly <= 0 || Lz <= 0)
            throw std::invalid_argument("Grid3: extents must be positive");
        Grid3 g;
        g.nx = nx; g.ny = ny; g.nz = nz;
        g.Lx = Lx; g.Ly = Ly; g.Lz = Lz;
        g.dx = Lx / nx; g.dy = Ly / ny; g.dz = Lz / nz;
        auto fill = [](std::vector<double>& ax, std::vector<double>& k, std::size_t n,
                       double d, double L) {
            ax.resize(n);
            k.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                ax[i] = (static_cast<double>(i) - static_cast<double>(n / 2)) * d;
                const double f = (i < (n + 1) / 2) ? static_cast<double>(i)
                                                   : static_cast<double>(i) - static_cast<double>(n);
                k[i] = 2.0 * std::numbers::pi * f / L;
            }
        };
        fill(g.x, g.kx, nx, g.dx, Lx);
        fill(g.y, g.ky, ny, g.dy, Ly);
        fill(g.z, g.kz, nz, g.dz, Lz);
        return g;
    }

    std::size_t size() const { return nx * ny * nz; }
    std::size_t idx(std::size_t i, std::size_t j, std::size_t k) const {
        return i + nx * (j + ny * k);
    }
    double dV() const { return dx * dy * dz; }
};

} // namespace atomfocus::gpe
