#pragma once
#include <cstddef>
#include <vector>

#include "atomfocus/lattice.hpp"
#include "atomfocus/profile.hpp"

namespace atomfocus::rays {

// One time sample of a classical trajectory. Atoms travel from z > 0 toward
// z < 0; vz is the signed velocity (negative while falling).
struct TrajectorySample {
    double t;
    double x, z;
    double vx, vz;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    bool reached_plane = false;  // plane event fired before the time budget ran out
    std::size_t n_steps = 0;

    const TrajectorySample& back() const { return samples.back(); }
    // relative total-energy drift across the trajectory (static lattice frame)
    double energy_drift(const lattice::LatticeSpec& spec) const;
};

// Integrates Newton's equations through the full (non-paraxial) standing-wave
// potential, in time, with an adaptive embedded Runge-Kutta pair. Stops at the
// crossing of the plane z = z_f, or after a generous time budget if the ray is
// turned back (reflected) by the lens.
//   x0       launch transverse position [m]
//   z_start  launch height [m], above the lens (|z_start| >= 2 sigma_z recommended)
//   v_z      approach speed [m/s], > 0 (motion is toward decreasing z)
// Throws std::runtime_error("stiff trajectory ...") on step-size underflow.
Trajectory trace_full(double x0, double z_start, double v_z,
                      const lattice::LatticeSpec& spec, double z_f = 0.0,
                      double rtol = 1e-10);

struct Histogram {
    std::vector<double> edges;   // n_bins + 1
    std::vector<double> counts;  // n_bins
};

struct DepositionProfile {
    std::vector<double> x_f;  // arrival positions on z = z_f, in launch order [m]
    Histogram histogram;      // 50 bins across the launch slit
    profile::KdeResult kde;   // Gaussian-kernel density over the arrivals
    double fwhm = 0.0;        // FWHM of the KDE curve [m]
    std::size_t n_rays = 0;
    std::size_t n_reflected = 0;  // rays that never reached z_f (reported, not dropped)
};

// Launches n_rays at uniformly spaced (cell-centered) x0 across
// [slit_lo, slit_hi] from z_start = spec.z0 with speed spec.v0, records the
// arrival x at z = z_f, bins into 50 bins and runs a KDE for the FWHM.
// Deterministic: aggregation is by ray index, independent of thread schedule.
DepositionProfile deposit(std::size_t n_rays, double slit_lo, double slit_hi,
                          double z_f, const lattice::LatticeSpec& spec,
                          int n_threads = 1);

} // namespace atomfocus::rays
