// Acceptance gate. One criterion group per invocation:
//   acceptance classical   -> criteria 1-5   (ray/aberration model)
//   acceptance gpe-core    -> criteria 6-8   (ground state, integrator, release)
//   acceptance table1      -> criteria 9-11  (full focusing pipeline)
//   acceptance sweep       -> criterion 12   (kick-momentum trend, 2D desk mode)
// Each criterion prints "CRITERION n: PASS|FAIL" plus the measured numbers;
// the exit code is nonzero when any gating check in the group fails.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "atomfocus/aberration.hpp"
#include "atomfocus/constants.hpp"
#include "atomfocus/gpe.hpp"
#include "atomfocus/lattice.hpp"
#include "atomfocus/paraxial.hpp"
#include "atomfocus/profile.hpp"
#include "atomfocus/rays.hpp"
#include "atomfocus/wavefunction.hpp"

using namespace atomfocus;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

std::string fmt(const char* f, ...) {
    va_list ap;
    va_start(ap, f);
    char buf[512];
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

class Criterion {
public:
    Criterion(int n, const char* title) : n_(n) {
        std::printf("-- criterion %d: %s\n", n, title);
        std::fflush(stdout);
    }
    void check(bool ok, const std::string& what) {
        ok_ = ok_ && ok;
        std::printf("   %s %s\n", ok ? "[ok]" : "[!!]", what.c_str());
        std::fflush(stdout);
    }
    void note(const std::string& what) {
        std::printf("        %s\n", what.c_str());
        std::fflush(stdout);
    }
    ~Criterion() {
        std::printf("CRITERION %d: %s\n", n_, ok_ ? "PASS" : "FAIL");
        std::fflush(stdout);
        if (!ok_) ++g_failures;
    }

private:
    int n_;
    bool ok_ = true;
};

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }
bool in_band(double x, double lo, double hi) { return x >= lo && x <= hi; }
double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Table-I row 1 drive: quasi-CO2 standing wave at the target lens strength.
lattice::LatticeSpec row1_lattice() {
    lattice::LatticeSpec s;
    s.lambda = 16.0 * phys::rb87_d2_defaults().lambda_res;
    s.sigma_z = 10e-6;
    s.delta_ang = phys::detuning_angular(200e9);
    s.z0 = 20e-6;  // 2 sigma_z of lead-in
    s.v0 = 1e-2;
    s.g = 0.0;
    const double e0 = 0.5 * s.species.mass * s.v0 * s.v0;
    s.I0 = lattice::peak_intensity_for_xi({5.37, e0}, s);
    return s;
}

gpe::TrapConfig release_trap() {
    constexpr double tau = 2.0 * std::numbers::pi;
    return {tau * 10.0, tau * 70.0, tau * 70.0};
}

gpe::BECConfig release_bec() {
    gpe::BECConfig b;
    b.n_atoms = 1e5;
    b.a_s = 100.0 * phys::bohr_radius;
    return b;
}

double x_variance(const gpe::Wavefunction& wf) {
    const auto& g = wf.grid;
    double s2 = 0.0, s0 = 0.0;
    for (std::size_t k = 0; k < g.nz; ++k)
        for (std::size_t j = 0; j < g.ny; ++j)
            for (std::size_t i = 0; i < g.nx; ++i) {
                const double d = std::norm(wf.psi[g.idx(i, j, k)]);
                s2 += d * g.x[i] * g.x[i];
                s0 += d;
            }
    return s2 / s0;
}

// 1/e full width of a velocity marginal (2*sqrt(2)*sigma of the Gaussian fit)
double one_over_e_full_width(const gpe::VelocityProfile& p) {
    const auto fit = profile::fit_gaussian(p.v, p.weight);
    return 2.0 * std::sqrt(2.0) * fit.sigma;
}

// ---------------------------------------------------------------------------

void run_classical() {
    const phys::Species rb = phys::rb87_d2_defaults();

    {
        Criterion c(1, "drive power and intensity for the target lens strength");
        {
            lattice::LatticeSpec s;
            s.lambda = 312e-6;
            s.sigma_z = 100e-6;
            s.delta_ang = phys::detuning_angular(200e9);
            const double e0 = 0.5 * rb.mass * 1e-2 * 1e-2;
            const double p = lattice::power_for_xi({5.37, e0}, s);
            c.check(rel(p, 43.018e-6) < 5e-3,
                    fmt("P0 = %.4f uW vs 43.018 +-0.5%% (lambda 312 um, sigma_z 100 um)",
                        p * 1e6));
        }
        {
            lattice::LatticeSpec s;
            s.lambda = 12.48e-6;
            s.sigma_z = 10e-6;
            s.delta_ang = phys::detuning_angular(200e9);
            const double e0 = 0.5 * rb.mass * 1e-2 * 1e-2;
            const double p = lattice::power_for_xi({5.37, e0}, s);
            const double i0 = lattice::peak_intensity_for_xi({5.37, e0}, s);
            c.check(rel(p, 0.0688e-6) < 5e-3,
                    fmt("P0 = %.5f uW vs 0.0688 +-0.5%% (lambda 12.48 um, sigma_z 10 um)",
                        p * 1e6));
            c.check(rel(i0, 1752.0) < 5e-3, fmt("I0 = %.1f W/m^2 vs 1752 +-0.5%%", i0));
        }
    }

    {
        Criterion c(2, "paraxial focal map at the design strength");
        const auto e = rays::paraxial_trace(5.37);
        c.check(std::abs(e.zf) < 0.02,
                fmt("focal crossing at z_f = %+.5f sigma_z (|z_f| < 0.02)", e.zf));
        const double f = rays::focal_length(5.37, 10e-6);
        c.check(rel(f, 5.531e-6) < 0.02, fmt("F(5.37) = %.4f um vs 5.531 +-2%%", f * 1e6));
        const double d = rays::dF_dxi(5.37);
        c.check(in_band(d, -0.028635, -0.021165),
                fmt("dF/dxi(5.37) = %.5f vs -0.0249 +-15%%", d));
        c.note("dF/dxi is a converged central difference; see the chromatic term of");
        c.note("the budget tool for how the slope enters downstream estimates");
    }

    {
        Criterion c(3, "weaker lenses focus deeper");
        const double xis[] = {5.37, 3.37, 2.37, 1.37};
        double prev = 1e9;
        bool ordered = true;
        std::string line = "z_f/sigma_z:";
        for (double xi : xis) {
            const double zf = rays::paraxial_trace(xi).zf;
            line += fmt(" %g -> %+.4f", xi, zf);
            ordered = ordered && zf < prev;
            prev = zf;
        }
        c.check(ordered, "strictly deeper focus as xi decreases");
        c.note(line);
    }

    {
        Criterion c(4, "spherical-aberration spot from full ray tracing");
        const auto spec = row1_lattice();
        const auto t0 = Clock::now();
        const auto dep =
            rays::deposit(62400, -spec.lambda / 4.0, spec.lambda / 4.0, 0.0, spec, 1);
        const double dt = seconds_since(t0);
        c.check(in_band(dep.fwhm * 1e6, 0.1224, 0.1496),
                fmt("(dx)_sph = %.4f um vs 0.136 +-10%%", dep.fwhm * 1e6));
        c.check(dt < 300.0, fmt("62400 rays in %.1f s (< 300 s)", dt));
        c.note(fmt("%zu rays traced, %zu reflected", dep.n_rays, dep.n_reflected));
    }

    {
        Criterion c(5, "aberration budget reproduces the reference component table");
        const double f = 5.531e-6, v = 1e-2, lam = 12.48e-6, sz = 10e-6;
        const double diff = aberration::diffraction_fwhm(f, v, lam, rb);
        const double chrom = aberration::chromatic_fwhm(5.37, -0.0249, sz, lam, f,
                                                        0.1791e-2, v);
        const double ang = aberration::angular_fwhm(f, 0.0264e-2, v);
        const auto b = aberration::assemble_budget(0.136e-6, diff, chrom, ang);
        c.check(rel(diff, 0.359e-6) < 0.01,
                fmt("diffraction = %.4f um vs 0.359 +-1%%", diff * 1e6));
        c.check(rel(chrom, 0.405e-6) < 0.01,
                fmt("chromatic   = %.4f um vs 0.405 +-1%%", chrom * 1e6));
        c.check(rel(ang, 0.146e-6) < 0.01,
                fmt("angular     = %.4f um vs 0.146 +-1%%", ang * 1e6));
        c.check(rel(b.total_non, 0.495e-6) < 0.01,
                fmt("total (free flight) = %.4f um vs 0.495 +-1%%", b.total_non * 1e6));
        c.check(rel(b.total_int, 1.046e-6) < 0.01,
                fmt("total (with spreads) = %.4f um vs 1.046 +-1%%", b.total_int * 1e6));
    }
}

// ---------------------------------------------------------------------------

void run_gpe_core() {
    const auto trap = release_trap();
    const auto bec = release_bec();
    const double mass = bec.species.mass;

    std::printf("-- relaxing the shared 128x64x128 ground state...\n");
    std::fflush(stdout);
    const auto grid = gpe::Grid3::make(128, 64, 128, 120e-6, 20e-6, 30e-6);
    gpe::ImaginaryTimeOptions iopt;
    iopt.stages = {{2e-6, 1500}, {2e-7, 1000}};
    const auto t_gs = Clock::now();
    const auto gs = gpe::imaginary_time_ground_state(
        gpe::thomas_fermi_seed(grid, trap, bec), trap, bec, iopt);
    std::printf("   done in %.0f s (%zu iterations)\n", seconds_since(t_gs),
                gs.iterations);

    {
        Criterion c(6, "interacting ground state: chemical potential and virial");
        const double mu_ref = 3.490396e-31;  // closed-form Thomas-Fermi value [J]
        c.check(rel(gs.mu, mu_ref) < 0.05,
                fmt("mu = %.6e J vs Thomas-Fermi %.6e (%.2f%%, < 5%%)", gs.mu, mu_ref,
                    100.0 * rel(gs.mu, mu_ref)));
        c.check(gs.virial_residual < 0.01,
                fmt("virial residual = %.2e (< 1e-2)", gs.virial_residual));
        c.note(fmt("energy/atom = %.4e J, final mu residual %.1e", gs.energy_per_atom,
                   gs.last_residual));
    }

    // interacting release: trap off, lattice off, 2 ms of mean-field expansion
    std::printf("-- releasing for 2 ms...\n");
    std::fflush(stdout);
    auto free_spec = row1_lattice();
    free_spec.I0 = 0.0;
    gpe::PropagateOptions popt;
    popt.dt = 2e-6;
    auto released = gpe::propagate(gs.psi, free_spec, bec, 2e-3, popt);

    {
        Criterion c(7, "split-step integrator fidelity");
        c.check(released.norm_drift < 1e-6,
                fmt("norm drift over the 2 ms release = %.2e (< 1e-6)",
                    released.norm_drift));

        // energy conservation in a frozen trap, sloshing interacting cloud
        const auto g_small = gpe::Grid3::make(64, 32, 32, 120e-6, 20e-6, 30e-6);
        gpe::ImaginaryTimeOptions iopt_s;
        iopt_s.stages = {{2e-6, 800}, {2e-7, 400}};
        const auto gs_s = gpe::imaginary_time_ground_state(
            gpe::thomas_fermi_seed(g_small, trap, bec), trap, bec, iopt_s);
        const auto vtrap = gpe::trap_potential(g_small, trap, mass);
        auto kicked = gpe::apply_kick(gs_s.psi, 1e-3, gpe::Axis::z, mass);
        const double e_start =
            gpe::total_energy(kicked, vtrap, bec.interaction_u(), mass);
        gpe::PropagateOptions po;
        po.dt = 1e-6;
        po.static_potential = &vtrap;
        po.track_energy = true;
        po.energy_interval = 100;
        const auto frozen =
            gpe::propagate(std::move(kicked), free_spec, bec, 1e-3, po);
        double drift = 0.0;
        for (double e : frozen.energy_history)
            drift = std::max(drift, rel(e, e_start));
        c.check(drift < 1e-4,
                fmt("energy drift in a frozen trap = %.2e over 1 ms (< 1e-4)", drift));

        // free single-particle dispersion of a Gaussian packet
        gpe::BECConfig ideal = bec;
        ideal.a_s = 0.0;
        const auto g_free = gpe::Grid3::make(64, 16, 16, 40e-6, 20e-6, 20e-6);
        auto packet = gpe::thomas_fermi_seed(g_free, trap, ideal);
        const double s0sq = x_variance(packet);
        const double t_fly = 2e-3;
        auto flown = gpe::propagate(std::move(packet), free_spec, ideal, t_fly,
                                    gpe::PropagateOptions{});
        const double grow = phys::hbar * t_fly / (2.0 * mass * s0sq);
        const double s_pred = std::sqrt(s0sq * (1.0 + grow * grow));
        const double s_got = std::sqrt(x_variance(flown.psi));
        c.check(rel(s_got, s_pred) < 1e-3,
                fmt("free dispersion: sigma(2 ms) = %.6f um vs %.6f analytic (%.1e)",
                    s_got * 1e6, s_pred * 1e6, rel(s_got, s_pred)));

        // Parseval closure of the momentum-space reading
        const auto cells = gpe::momentum_cells(released.psi);
        double total = 0.0;
        for (double w : cells) total += w;
        const double pars = rel(total, released.psi.norm());
        c.check(pars < 1e-10, fmt("Parseval closure = %.2e (< 1e-10)", pars));
    }

    {
        Criterion c(8, "velocity spreads 2 ms after the interacting release");
        const auto [mx, mz] = gpe::velocity_marginals(released.psi, mass);
        const double wx = one_over_e_full_width(mx) * 1e2;  // cm/s
        const double wz = one_over_e_full_width(mz) * 1e2;
        c.check(in_band(wz, 0.152235, 0.205965),
                fmt("dv_z = %.5f cm/s vs 0.1791 +-15%%", wz));
        c.check(in_band(wx, 0.02112, 0.03168),
                fmt("dv_x = %.5f cm/s vs 0.0264 +-20%%", wx));
    }
}

// ---------------------------------------------------------------------------

void run_table1() {
    const auto trap = release_trap();
    const auto bec = release_bec();
    const auto t_group = Clock::now();

    gpe::FocusConfig f1;
    f1.grid.nx = 1024;
    f1.grid.ny = 32;
    f1.grid.nz = 64;
    f1.grid.Lx = 0.0;  // 16 lattice periods
    f1.grid.Ly = 20e-6;
    f1.grid.Lz = 24e-6;
    f1.trap = trap;
    f1.bec = bec;
    f1.lattice = row1_lattice();
    f1.dt_policy.dt = 2e-6;
    f1.dt_policy.convergence_study = true;
    f1.dt_policy.fwhm_rtol = 0.05;
    f1.dt_policy.max_halvings = 2;
    f1.ground_state.stages = {{2e-6, 1500}, {2e-7, 1000}};

    std::printf("-- row 1, interacting leg (ground state + focusing)...\n");
    std::fflush(stdout);
    const auto r1_int = gpe::focus_run(f1);
    std::printf("   fwhm %.4f um, peak %.1f /um^2 [%.0f s]\n", r1_int.fwhm * 1e6,
                r1_int.peak_density, seconds_since(t_group));
    std::fflush(stdout);

    auto f1n = f1;
    f1n.interactions_off_at_release = true;
    f1n.precomputed_ground_state = &r1_int.psi_ground;
    std::printf("-- row 1, free-flight leg...\n");
    std::fflush(stdout);
    const auto r1_non = gpe::focus_run(f1n);
    std::printf("   fwhm %.4f um, peak %.1f /um^2 [%.0f s]\n", r1_non.fwhm * 1e6,
                r1_non.peak_density, seconds_since(t_group));
    std::fflush(stdout);
    const double row1_elapsed = seconds_since(t_group);

    auto trail = [](const std::vector<double>& v) {
        std::string s = "fwhm vs dt trail (um):";
        for (double f : v) s += fmt(" %.4f", f * 1e6);
        return s;
    };
    auto converged = [](const std::vector<double>& v, double rtol) {
        return v.size() >= 2 && std::abs(v.back() - v[v.size() - 2]) <= rtol * v.back();
    };

    {
        Criterion c(9, "focused spot pair: width, peak density, ratio");
        c.check(in_band(r1_int.fwhm * 1e6, 0.8592, 1.2888),
                fmt("interacting fwhm = %.4f um vs 1.074 +-20%%", r1_int.fwhm * 1e6));
        c.check(in_band(r1_non.fwhm * 1e6, 0.3816, 0.5724),
                fmt("free-flight fwhm = %.4f um vs 0.477 +-20%%", r1_non.fwhm * 1e6));
        const double ratio = r1_int.fwhm / r1_non.fwhm;
        c.check(in_band(ratio, 1.80, 2.70), fmt("ratio = %.3f vs 2.25 +-20%%", ratio));
        c.check(in_band(r1_int.peak_density, 829.5, 1540.5),
                fmt("interacting peak = %.1f /um^2 vs 1185 +-30%%", r1_int.peak_density));
        c.check(in_band(r1_non.peak_density, 2639.7, 4902.3),
                fmt("free-flight peak = %.1f /um^2 vs 3771 +-30%%", r1_non.peak_density));
        c.check(converged(r1_int.fwhm_vs_dt, 0.05) && converged(r1_non.fwhm_vs_dt, 0.05),
                fmt("dt convergence within 5%% (final dt %.2e s)", r1_int.dt_used));
        c.check(row1_elapsed < 14400.0, fmt("row-1 pair in %.0f s (< 14400)", row1_elapsed));
        c.note(trail(r1_int.fwhm_vs_dt) + "  |  " + trail(r1_non.fwhm_vs_dt));
        c.note(fmt("ground state: mu %.4e J, virial %.1e, norm drift %.1e", r1_int.ground_state_mu,
                   r1_int.ground_state_virial, r1_int.norm_drift));
    }

    // row 2: twice the waist, same strength -> twice the spot
    gpe::FocusConfig f2 = f1;
    f2.grid.nz = 128;
    f2.grid.Lz = 48e-6;
    f2.lattice.sigma_z = 20e-6;
    f2.lattice.z0 = 40e-6;
    {
        const double e0 = 0.5 * bec.species.mass * f2.lattice.v0 * f2.lattice.v0;
        f2.lattice.I0 = lattice::peak_intensity_for_xi({5.37, e0}, f2.lattice);
    }
    f2.dt_policy.max_halvings = 1;

    std::printf("-- row 2 (sigma_z x2), interacting leg...\n");
    std::fflush(stdout);
    const auto r2_int = gpe::focus_run(f2);
    std::printf("   fwhm %.4f um [%.0f s]\n", r2_int.fwhm * 1e6, seconds_since(t_group));
    std::fflush(stdout);
    auto f2n = f2;
    f2n.interactions_off_at_release = true;
    f2n.precomputed_ground_state = &r2_int.psi_ground;
    std::printf("-- row 2, free-flight leg...\n");
    std::fflush(stdout);
    const auto r2_non = gpe::focus_run(f2n);
    std::printf("   fwhm %.4f um [%.0f s]\n", r2_non.fwhm * 1e6, seconds_since(t_group));
    std::fflush(stdout);

    // row 3: twice the speed, same strength -> half the spot
    gpe::FocusConfig f3 = f1;
    f3.lattice.v0 = 2e-2;
    {
        const double e0 = 0.5 * bec.species.mass * f3.lattice.v0 * f3.lattice.v0;
        f3.lattice.I0 = lattice::peak_intensity_for_xi({5.37, e0}, f3.lattice);
    }
    f3.dt_policy.dt = 1e-6;
    f3.dt_policy.max_halvings = 1;
    f3.precomputed_ground_state = &r1_int.psi_ground;

    std::printf("-- row 3 (v_z x2), interacting leg...\n");
    std::fflush(stdout);
    const auto r3_int = gpe::focus_run(f3);
    std::printf("   fwhm %.4f um [%.0f s]\n", r3_int.fwhm * 1e6, seconds_since(t_group));
    std::fflush(stdout);
    auto f3n = f3;
    f3n.interactions_off_at_release = true;
    f3n.precomputed_ground_state = &r1_int.psi_ground;
    std::printf("-- row 3, free-flight leg...\n");
    std::fflush(stdout);
    const auto r3_non = gpe::focus_run(f3n);
    std::printf("   fwhm %.4f um [%.0f s]\n", r3_non.fwhm * 1e6, seconds_since(t_group));
    std::fflush(stdout);

    {
        Criterion c(10, "spot scaling with waist and speed");
        const double s2i = r2_int.fwhm / r1_int.fwhm;
        const double s2n = r2_non.fwhm / r1_non.fwhm;
        c.check(in_band(s2i, 1.7, 2.3),
                fmt("sigma_z x2, interacting: fwhm ratio %.3f vs 2.0 +-15%%", s2i));
        c.check(in_band(s2n, 1.7, 2.3),
                fmt("sigma_z x2, free flight: fwhm ratio %.3f vs 2.0 +-15%%", s2n));
        const double s3i = r3_int.fwhm / r1_int.fwhm;
        const double s3n = r3_non.fwhm / r1_non.fwhm;
        c.check(in_band(s3i, 0.425, 0.575),
                fmt("v_z x2, interacting: fwhm ratio %.3f vs 0.5 +-15%%", s3i));
        c.check(in_band(s3n, 0.425, 0.575),
                fmt("v_z x2, free flight: fwhm ratio %.3f vs 0.5 +-15%%", s3n));
        c.note(fmt("row 2: %.4f / %.4f um; row 3: %.4f / %.4f um", r2_int.fwhm * 1e6,
                   r2_non.fwhm * 1e6, r3_int.fwhm * 1e6, r3_non.fwhm * 1e6));
        c.note(trail(r2_int.fwhm_vs_dt) + "  |  " + trail(r3_int.fwhm_vs_dt));
    }

    {
        Criterion c(11, "classical budget with measured spreads matches the GPE spot");
        // velocity spreads of this cloud, 2 ms after release on the same grid
        auto free_spec = f1.lattice;
        free_spec.I0 = 0.0;
        gpe::PropagateOptions popt;
        popt.dt = 2e-6;
        const auto rel2ms = gpe::propagate(r1_int.psi_ground, free_spec, bec, 2e-3, popt);
        const auto [mx, mz] = gpe::velocity_marginals(rel2ms.psi, bec.species.mass);
        const double dvx = one_over_e_full_width(mx);
        const double dvz = one_over_e_full_width(mz);

        const auto spec = row1_lattice();
        const double fl = rays::focal_length(5.37, spec.sigma_z);
        const double dfdxi = rays::dF_dxi(5.37);
        const auto dep =
            rays::deposit(62400, -spec.lambda / 4.0, spec.lambda / 4.0, 0.0, spec, 1);
        const double diff =
            aberration::diffraction_fwhm(fl, spec.v0, spec.lambda, spec.species);
        const double chrom = aberration::chromatic_fwhm(5.37, dfdxi, spec.sigma_z,
                                                        spec.lambda, fl, dvz, spec.v0);
        const double ang = aberration::angular_fwhm(fl, dvx, spec.v0);
        const auto b = aberration::assemble_budget(dep.fwhm, diff, chrom, ang);
        c.note(fmt("measured dv_z %.5f cm/s, dv_x %.5f cm/s", dvz * 1e2, dvx * 1e2));
        c.note(fmt("sph %.4f + diff %.4f + chrom %.4f + ang %.4f um", dep.fwhm * 1e6,
                   diff * 1e6, chrom * 1e6, ang * 1e6));
        c.check(rel(b.total_int, r1_int.fwhm) <= 0.15,
                fmt("budget total %.4f um vs GPE %.4f um (%.1f%%, <= 15%%)",
                    b.total_int * 1e6, r1_int.fwhm * 1e6,
                    100.0 * rel(b.total_int, r1_int.fwhm)));
    }

    std::printf("-- table-1 group total: %.0f s\n", seconds_since(t_group));
}

// ---------------------------------------------------------------------------

void run_sweep() {
    const auto trap = release_trap();
    const auto bec = release_bec();
    const double k_lat = row1_lattice().k();
    const double hk = phys::hbar * k_lat / bec.species.mass;  // one-photon recoil step

    Criterion c(12, "kick-momentum trend toward the deep-focus regime (2D desk)");
    c.note(fmt("recoil velocity step hbar*k/m = %.4e m/s", hk));
    c.note("a 3D grid resolving the 20 nm regime exceeds the memory budget; the");
    c.note("gate is the documented trend protocol on the 2D desk model instead");

    struct Point {
        double p, fwhm, peak;
        std::vector<double> trail;
    };
    std::vector<Point> pts;
    gpe::Wavefunction shared_gs;  // all three points live on the same grid

    for (double p : {16.0, 32.0, 64.0}) {
        gpe::FocusConfig fc;
        fc.desk_2d = true;
        fc.grid.nx = 16384;
        fc.grid.ny = 1;
        fc.grid.nz = 32;
        fc.grid.Ly = 20e-6;
        fc.grid.Lz = 16e-6;
        fc.trap = trap;
        fc.bec = bec;
        fc.lattice = row1_lattice();
        fc.grid.Lx = 2.0 * fc.lattice.lambda;  // 4 lattice periods
        fc.lattice.v0 = p * hk;
        const double e0 = 0.5 * bec.species.mass * fc.lattice.v0 * fc.lattice.v0;
        fc.lattice.I0 = lattice::peak_intensity_for_xi({5.37, e0}, fc.lattice);
        fc.dt_policy.dt = 4.576e-6 / p;  // fixed phase advance per step across the sweep
        fc.dt_policy.convergence_study = true;
        fc.dt_policy.fwhm_rtol = 0.05;
        fc.dt_policy.max_halvings = 1;
        fc.ground_state.stages = {{2e-6, 1500}, {2e-7, 1000}};
        if (shared_gs.grid.nx > 0) fc.precomputed_ground_state = &shared_gs;

        std::printf("-- p = %g hk: v0 = %.4e m/s, dt = %.2e s...\n", p, fc.lattice.v0,
                    fc.dt_policy.dt);
        std::fflush(stdout);
        const auto t0 = Clock::now();
        auto r = gpe::focus_run(fc);
        std::printf("   fwhm %.4f um (%.1f nm), peak %.4g /um^2 [%.0f s]\n",
                    r.fwhm * 1e6, r.fwhm * 1e9, r.peak_density, seconds_since(t0));
        std::fflush(stdout);
        if (shared_gs.grid.nx == 0) shared_gs = r.psi_ground;
        pts.push_back({p, r.fwhm, r.peak_density, r.fwhm_vs_dt});
    }

    std::string line = "fwhm (nm):";
    for (const auto& q : pts) line += fmt(" p=%g -> %.1f", q.p, q.fwhm * 1e9);
    c.note(line);
    c.check(pts[0].fwhm > pts[1].fwhm && pts[1].fwhm > pts[2].fwhm,
            "fwhm decreases strictly with kick momentum");
    const double d01 = (pts[0].fwhm - pts[1].fwhm) / pts[0].fwhm;
    const double d12 = (pts[1].fwhm - pts[2].fwhm) / pts[1].fwhm;
    c.check(d01 > d12,
            fmt("relative decrement shrinks: %.3f then %.3f (plateau onset)", d01, d12));
    for (const auto& q : pts) {
        std::string t = fmt("p=%g dt trail (nm):", q.p);
        for (double f : q.trail) t += fmt(" %.1f", f * 1e9);
        c.note(t);
    }

    // non-gating spot check deeper into the regime, finer transverse grid
    try {
        gpe::FocusConfig fc;
        fc.desk_2d = true;
        fc.grid.nx = 32768;
        fc.grid.ny = 1;
        fc.grid.nz = 32;
        fc.grid.Ly = 20e-6;
        fc.grid.Lz = 16e-6;
        fc.trap = trap;
        fc.bec = bec;
        fc.lattice = row1_lattice();
        fc.grid.Lx = 2.0 * fc.lattice.lambda;
        fc.lattice.v0 = 128.0 * hk;
        const double e0 = 0.5 * bec.species.mass * fc.lattice.v0 * fc.lattice.v0;
        fc.lattice.I0 = lattice::peak_intensity_for_xi({5.37, e0}, fc.lattice);
        fc.dt_policy.dt = 4.576e-6 / 128.0;
        fc.dt_policy.convergence_study = false;
        fc.ground_state.stages = {{2e-6, 1500}, {2e-7, 1000}};
        std::printf("-- p = 128 hk spot check (non-gating)...\n");
        std::fflush(stdout);
        const auto r = gpe::focus_run(fc);
        c.note(fmt("p=128: fwhm %.2f nm (3D reference 19.68), peak %.4g /um^2 "
                   "(reference 4.068e4); informational only",
                   r.fwhm * 1e9, r.peak_density));
    } catch (const std::exception& e) {
        c.note(fmt("p=128 spot check unavailable: %s", e.what()));
    }
}

}  // namespace

int main(int argc, char** argv) {
    const std::string group = argc > 1 ? argv[1] : "";
    try {
        if (group == "classical")
            run_classical();
        else if (group == "gpe-core")
            run_gpe_core();
        else if (group == "table1")
            run_table1();
        else if (group == "sweep")
            run_sweep();
        else {
            std::fprintf(stderr, "usage: acceptance <classical|gpe-core|table1|sweep>\n");
            return 2;
        }
    } catch (const std::exception& e) {
        std::printf("GROUP ABORTED: %s\n", e.what());
        return 1;
    }
    return g_failures == 0 ? 0 : 1;
}
