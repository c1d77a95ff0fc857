#pragma once
#include <optional>
#include <string>
#include <vector>

#include "atomfocus/constants.hpp"
#include "atomfocus/lattice.hpp"
#include "atomfocus/profile.hpp"
#include "atomfocus/wavefunction.hpp"

namespace atomfocus::gpe {

struct TrapConfig {
    double omega_x = 0, omega_y = 0, omega_z = 0;  // rad/s, all >= 0
};

struct BECConfig {
    double n_atoms = 0;
    double a_s = 0;  // s-wave scattering length [m], >= 0
    phys::Species species = phys::rb87_d2_defaults();

    double interaction_u() const {  // u = 4πħ²a_s/m
        return 4.0 * std::numbers::pi * phys::hbar * phys::hbar * a_s / species.mass;
    }
};

enum class Axis { x, y, z };

// harmonic trap ½m(ωx²x²+ωy²y²+ωz²z²) sampled on the grid, psi layout
std::vector<double> trap_potential(const Grid3& grid, const TrapConfig& trap, double mass);

// ---- ground state ----------------------------------------------------------

// Thomas-Fermi profile |ψ|² = max(0, (µ − V_trap)/u) with µ bisected so the
// grid norm is N; for a_s = 0 returns the harmonic-oscillator Gaussian.
// Throws if the Thomas-Fermi ellipsoid does not fit the grid (names the axis).
Wavefunction thomas_fermi_seed(const Grid3& grid, const TrapConfig& trap,
                               const BECConfig& bec);

// closed-form continuum TF chemical potential (reference value)
double thomas_fermi_mu(const TrapConfig& trap, const BECConfig& bec);

struct GroundStateResult {
    Wavefunction psi;
    double mu = 0;               // (E_kin + E_pot + 2 E_int)/N [J]
    double energy_per_atom = 0;  // (E_kin + E_pot + E_int)/N [J]
    double virial_residual = 0;  // |2T − 2V + d·E_int| / E_total, d = dynamical axes
    double last_residual = 0;    // relative µ change at the final check
    std::size_t iterations = 0;
    std::vector<double> mu_history;  // one entry per convergence check
};

struct ImagStage {
    double dtau;            // imaginary-time step [s]
    std::size_t max_steps;
};

struct ImaginaryTimeOptions {
    // The bulk relaxes on the scale ħ/µ (~0.3 ms here), so the first stage
    // covers several of those with a large step; later stages shrink the step
    // to remove its splitting bias. A stage also ends early once the relative
    // µ change per check drops below tolerance.
    std::vector<ImagStage> stages = {{2e-6, 4000}, {2e-7, 2000}};
    double tolerance = 1e-9;
    std::size_t check_interval = 50;
    int n_threads = 1;
};

// Symmetric split-step imaginary-time relaxation with per-step
// renormalization, run through the staged step schedule above. Throws when
// even the final stage ends with a per-check µ residual above 10⁻³ (a state
// that is still sliding); the virial residual is reported, not enforced.
GroundStateResult imaginary_time_ground_state(Wavefunction seed, const TrapConfig& trap,
                                              const BECConfig& bec,
                                              const ImaginaryTimeOptions& opt = {});

// ---- real time -------------------------------------------------------------

// multiply by the plane-wave phase exp(i m v r/ħ) along the given axis
Wavefunction apply_kick(Wavefunction psi, double v, Axis axis, double mass);

struct PropagateOptions {
    double dt = 1e-6;        // time step [s]
    int n_threads = 1;
    // optional static potential added to the lattice term, same layout as psi
    const std::vector<double>* static_potential = nullptr;
    bool track_energy = false;           // record total energy every check
    std::size_t energy_interval = 100;
};

struct PropagateResult {
    Wavefunction psi;
    double norm_drift = 0;  // |norm_end/norm_start − 1|
    bool boundary_contamination = false;  // density at a y/z face > 1e-6 of peak
    double boundary_ratio = 0;
    std::size_t n_steps = 0;
    std::vector<double> energy_history;  // filled when track_energy
};

// Strang split-step evolution under the moving-lattice potential of the
// stationary-BEC frame: V(x,z,t) = (ħΔ/2)·ln(1 + p₀·env(z,t)·sin²(kx)) with
// env(z,t) the Gaussian envelope at distance z − (z0 − ½gt² − v0·t), so each
// z-slice meets the lattice waist at its own time.
// Pass spec.I0 = 0 for free evolution. The mean-field term uses bec.a_s.
PropagateResult propagate(Wavefunction psi, const lattice::LatticeSpec& spec,
                          const BECConfig& bec, double t_end,
                          const PropagateOptions& opt = {});

// total energy in a frozen external potential (kinetic + potential + mean-field)
double total_energy(const Wavefunction& wf, const std::vector<double>& potential,
                    double interaction_u, double mass);

// ---- focusing experiment ----------------------------------------------------

struct GridSpec {
    std::size_t nx = 1024, ny = 32, nz = 64;
    double Lx = 0, Ly = 20e-6, Lz = 32e-6;  // Lx = 0 → 16 lattice periods
};

struct DtPolicy {
    double dt = 1e-6;            // starting step [s]
    bool convergence_study = false;  // halve dt until FWHM change < fwhm_rtol
    double fwhm_rtol = 0.01;
    int max_halvings = 3;
};

struct FocusConfig {
    GridSpec grid;
    TrapConfig trap;
    BECConfig bec;
    lattice::LatticeSpec lattice;  // z0, v0, g describe the approach trajectory
    // paper convention for the "non-interacting" rows: prepare the interacting
    // ground state, then drop the mean-field term when the lattice turns on
    bool interactions_off_at_release = false;
    DtPolicy dt_policy;
    bool sweep_mode = false;  // report the 1/e-averaged multi-peak FWHM
    bool desk_2d = false;     // collapse y (ny=1) with u → u/(√(2π)·l_y)
    ImaginaryTimeOptions ground_state;
    int n_threads = 1;
    // reuse an already relaxed state (must live on the same grid); lets the
    // interacting / non-interacting pair share one ground-state solve
    const Wavefunction* precomputed_ground_state = nullptr;
    bool ground_state_only = false;  // stop after the ground-state stage
};

struct FocusResult {
    double fwhm = 0;              // fitted FWHM [m]
    double peak_density = 0;      // peak column density [atoms/µm²]
    std::vector<double> x;        // profile axis [m]
    std::vector<double> profile;  // column density at the waist-plane z-slice [atoms/m²]
    profile::FitResult fit;
    double t_star = 0;            // snapshot time z0/v_z (g=0) [s]
    double dt_used = 0;
    std::vector<double> fwhm_vs_dt;  // convergence study trail (coarsest first)
    double ground_state_mu = 0;
    double ground_state_virial = 0;
    double ground_state_energy = 0;  // per atom [J]
    std::size_t ground_state_iterations = 0;
    double norm_drift = 0;
    bool boundary_contamination = false;
    Wavefunction psi_ground;
    Wavefunction psi_final;
};

// Full pipeline: ground state → release → Strang propagation to the focal
// crossing t* → y-integrated column density → x-profile at the beam-waist
// z-slice (the deposition plane, z ≈ 0 in the cloud frame at t*) →
// shared-width blended-peak fit (single-peak) or 1/e-averaged peak statistics
// (sweep mode).
FocusResult focus_run(const FocusConfig& cfg);

} // namespace atomfocus::gpe
