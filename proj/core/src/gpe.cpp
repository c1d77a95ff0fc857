#include "atomfocus/gpe.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace atomfocus::gpe {

namespace {

using std::size_t;
constexpr double hbar = phys::hbar;

std::vector<double> trap_potential_field(const Grid3& g, const TrapConfig& trap, double mass) {
    std::vector<double> v(g.size());
    for (size_t k = 0; k < g.nz; ++k) {
        const double vz = 0.5 * mass * trap.omega_z * trap.omega_z * g.z[k] * g.z[k];
        for (size_t j = 0; j < g.ny; ++j) {
            const double vyz = vz + 0.5 * mass * trap.omega_y * trap.omega_y * g.y[j] * g.y[j];
            double* row = v.data() + g.idx(0, j, k);
            for (size_t i = 0; i < g.nx; ++i)
                row[i] = vyz + 0.5 * mass * trap.omega_x * trap.omega_x * g.x[i] * g.x[i];
        }
    }
    return v;
}

std::vector<double> k_squared(const Grid3& g) {
    std::vector<double> k2(g.size());
    for (size_t k = 0; k < g.nz; ++k)
        for (size_t j = 0; j < g.ny; ++j) {
            const double kyz = g.ky[j] * g.ky[j] + g.kz[k] * g.kz[k];
            double* row = k2.data() + g.idx(0, j, k);
            for (size_t i = 0; i < g.nx; ++i) row[i] = kyz + g.kx[i] * g.kx[i];
        }
    return k2;
}

struct Energies {
    double kinetic, potential, interaction;
    double total() const { return kinetic + potential + interaction; }
};

Energies energies(const Wavefunction& wf, const std::vector<double>& V, double u,
                  double mass) {
    const auto& g = wf.grid;
    Energies e{0, 0, 0};
    for (size_t i = 0; i < wf.psi.size(); ++i) {
        const double n = std::norm(wf.psi[i]);
        e.potential += V[i] * n;
        e.interaction += n * n;
    }
    e.potential *= g.dV();
    e.interaction *= 0.5 * u * g.dV();

    Wavefunction tmp(wf);
    tmp.fft().forward();
    const auto k2 = k_squared(g);
    double ek = 0.0;
    for (size_t i = 0; i < tmp.psi.size(); ++i) ek += k2[i] * std::norm(tmp.psi[i]);
    e.kinetic = ek * hbar * hbar / (2.0 * mass) * g.dV() / static_cast<double>(g.size());
    return e;
}

} // namespace

std::vector<double> trap_potential(const Grid3& grid, const TrapConfig& trap, double mass) {
    return trap_potential_field(grid, trap, mass);
}

double thomas_fermi_mu(const TrapConfig& trap, const BECConfig& bec) {
    const double wbar = std::cbrt(trap.omega_x * trap.omega_y * trap.omega_z);
    const double abar = std::sqrt(hbar / (bec.species.mass * wbar));
    return 0.5 * hbar * wbar * std::pow(15.0 * bec.n_atoms * bec.a_s / abar, 0.4);
}

Wavefunction thomas_fermi_seed(const Grid3& grid, const TrapConfig& trap,
                               const BECConfig& bec) {
    if (bec.n_atoms <= 0) throw std::invalid_argument("thomas_fermi_seed: N must be > 0");
    Wavefunction wf(grid);

    if (bec.a_s == 0.0) {
        const double m = bec.species.mass;
        auto width = [&](double omega, const char* axis, size_t n) {
            if (n > 1 && omega <= 0)
                throw std::invalid_argument(std::string("thomas_fermi_seed: omega_") + axis +
                                            " must be > 0 for the ideal-gas ground state");
            return omega > 0 ? std::sqrt(hbar / (m * omega)) : 1.0;
        };
        const double lx = width(trap.omega_x, "x", grid.nx);
        const double ly = width(trap.omega_y, "y", grid.ny);
        const double lz = width(trap.omega_z, "z", grid.nz);
        for (size_t k = 0; k < grid.nz; ++k)
            for (size_t j = 0; j < grid.ny; ++j)
                for (size_t i = 0; i < grid.nx; ++i) {
                    const double a = grid.x[i] / lx, b = grid.y[j] / ly, c = grid.z[k] / lz;
                    wf.psi[grid.idx(i, j, k)] = std::exp(-0.5 * (a * a + b * b + c * c));
                }
        wf.normalize(bec.n_atoms);
        return wf;
    }

    if (trap.omega_x <= 0 || trap.omega_y <= 0 || trap.omega_z <= 0)
        throw std::invalid_argument("thomas_fermi_seed: trap frequencies must be > 0");

    const double u = bec.interaction_u();
    const double mu0 = thomas_fermi_mu(trap, bec);
    const double m = bec.species.mass;
    // containment check against the continuum radii
    const struct { double omega; double half_extent; const char* name; size_t n; } axes[] = {
        {trap.omega_x, grid.Lx / 2, "x", grid.nx},
        {trap.omega_y, grid.Ly / 2, "y", grid.ny},
        {trap.omega_z, grid.Lz / 2, "z", grid.nz},
    };
    for (const auto& a : axes) {
        if (a.n == 1) continue;  // collapsed axis (2D mode)
        const double radius = std::sqrt(2.0 * mu0 / m) / a.omega;
        if (radius >= a.half_extent)
            throw std::invalid_argument(
                std::string("thomas_fermi_seed: Thomas-Fermi radius exceeds the grid along ") +
                a.name);
    }

    const auto V = trap_potential_field(grid, trap, m);
    auto grid_norm = [&](double mu) {
        double s = 0.0;
        for (double v : V) s += std::max(0.0, mu - v);
        return s / u * grid.dV();
    };
    double lo = 0.0, hi = mu0;
    for (int it = 0; it < 60 && grid_norm(hi) < bec.n_atoms; ++it) hi *= 2.0;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (grid_norm(mid) < bec.n_atoms ? lo : hi) = mid;
        if ((hi - lo) < 1e-14 * hi) break;
    }
    const double mu = 0.5 * (lo + hi);
    for (size_t i = 0; i < wf.psi.size(); ++i)
        wf.psi[i] = std::sqrt(std::max(0.0, mu - V[i]) / u);
    wf.normalize(bec.n_atoms);
    return wf;
}

GroundStateResult imaginary_time_ground_state(Wavefunction seed, const TrapConfig& trap,
                                              const BECConfig& bec,
                                              const ImaginaryTimeOptions& opt) {
    const auto& g = seed.grid;
    const double u = bec.interaction_u();
    const double m = bec.species.mass;
    const double n_atoms = bec.n_atoms;
    const auto V = trap_potential_field(g, trap, m);
    const auto k2 = k_squared(g);
    if (opt.stages.empty())
        throw std::invalid_argument("imaginary_time_ground_state: empty stage schedule");

    auto mu_of = [&](const Wavefunction& wf) {
        const auto e = energies(wf, V, u, m);
        return (e.kinetic + e.potential + 2.0 * e.interaction) / n_atoms;
    };

    GroundStateResult out;
    auto& wf = seed;
    auto& fft = wf.fft(opt.n_threads);
    std::vector<double> kin(g.size());
    double mu_prev = mu_of(wf);
    out.mu_history.push_back(mu_prev);
    double residual = 1.0;
    size_t total_steps = 0;
    for (const auto& stage : opt.stages) {
        const double pref = -0.5 * stage.dtau / hbar;
        for (size_t i = 0; i < kin.size(); ++i)
            kin[i] = std::exp(-stage.dtau * hbar * k2[i] / (2.0 * m));
        for (size_t step = 0; step < stage.max_steps; ++step, ++total_steps) {
            for (size_t i = 0; i < wf.psi.size(); ++i)
                wf.psi[i] *= std::exp(pref * (V[i] + u * std::norm(wf.psi[i])));
            fft.forward();
            for (size_t i = 0; i < wf.psi.size(); ++i) wf.psi[i] *= kin[i];
            fft.inverse();
            for (size_t i = 0; i < wf.psi.size(); ++i)
                wf.psi[i] *= std::exp(pref * (V[i] + u * std::norm(wf.psi[i])));
            wf.normalize(n_atoms);
            if ((step + 1) % opt.check_interval == 0) {
                const double mu = mu_of(wf);
                residual = std::abs(mu - mu_prev) / std::abs(mu);
                out.mu_history.push_back(mu);
                mu_prev = mu;
                if (residual < opt.tolerance) break;
            }
        }
    }
    if (residual > 1e-3)
        throw std::runtime_error("imaginary_time_ground_state: still sliding after " +
                                 std::to_string(total_steps) + " steps; last residual " +
                                 std::to_string(residual));

    const auto e = energies(wf, V, u, m);
    out.mu = (e.kinetic + e.potential + 2.0 * e.interaction) / n_atoms;
    out.energy_per_atom = e.total() / n_atoms;
    // dilation identity 2T - 2V + d*E_int = 0, d = number of non-collapsed axes
    const double dims = (g.nx > 1) + (g.ny > 1) + (g.nz > 1);
    out.virial_residual =
        std::abs(2.0 * e.kinetic - 2.0 * e.potential + dims * e.interaction) / e.total();
    out.last_residual = residual;
    out.iterations = total_steps;
    out.psi = std::move(wf);
    return out;
}

Wavefunction apply_kick(Wavefunction psi, double v, Axis axis, double mass) {
    const auto& g = psi.grid;
    const double c = mass * v / hbar;
    auto phase = [&](double r) { return std::complex<double>(std::cos(c * r), std::sin(c * r)); };
    for (size_t k = 0; k < g.nz; ++k)
        for (size_t j = 0; j < g.ny; ++j) {
            auto* row = psi.psi.data() + g.idx(0, j, k);
            if (axis == Axis::x) {
                for (size_t i = 0; i < g.nx; ++i) row[i] *= phase(g.x[i]);
            } else {
                const auto f = phase(axis == Axis::y ? g.y[j] : g.z[k]);
                for (size_t i = 0; i < g.nx; ++i) row[i] *= f;
            }
        }
    return psi;
}

double total_energy(const Wavefunction& wf, const std::vector<double>& potential,
                    double interaction_u, double mass) {
    return energies(wf, potential, interaction_u, mass).total();
}

PropagateResult propagate(Wavefunction psi, const lattice::LatticeSpec& spec,
                          const BECConfig& bec, double t_end, const PropagateOptions& opt) {
    const auto& g = psi.grid;
    if (opt.static_potential && opt.static_potential->size() != g.size())
        throw std::invalid_argument("propagate: static potential size mismatch");
    if (t_end < psi.time) throw std::invalid_argument("propagate: t_end before state time");

    const double m = bec.species.mass;
    const double u = bec.interaction_u();
    const double span = t_end - psi.time;
    const size_t n_steps = span > 0 ? std::max<size_t>(1, std::llround(span / opt.dt)) : 0;
    const double dt = n_steps ? span / static_cast<double>(n_steps) : 0.0;

    PropagateResult out;
    out.n_steps = n_steps;
    const double norm0 = psi.norm();

    const auto k2 = k_squared(g);
    std::vector<std::complex<double>> kin(g.size());
    for (size_t i = 0; i < kin.size(); ++i) {
        const double th = -dt * hbar * k2[i] / (2.0 * m);
        kin[i] = {std::cos(th), std::sin(th)};
    }
    std::vector<double> sin2(g.nx);
    const double klat = spec.lambda > 0 ? spec.k() : 0.0;
    for (size_t i = 0; i < g.nx; ++i) {
        const double s = std::sin(klat * g.x[i]);
        sin2[i] = s * s;
    }
    const double p0 = spec.I0 > 0 ? lattice::peak_saturation(spec) : 0.0;
    const double vpref = 0.5 * hbar * spec.delta_ang;

    auto& fft = psi.fft(opt.n_threads);
    // z-resolved lattice column: vlat[k*nx + i] = (ħΔ/2) ln(1 + p0 env(z_k) sin²(k x_i))
    std::vector<double> vlat(g.nx * g.nz, 0.0);
    std::vector<double> envz(g.nz, 0.0);

    auto fill_lattice = [&](double t) {
        const double zc = spec.z0 - lattice::lattice_center(t, spec);
        for (size_t k = 0; k < g.nz; ++k) {
            const double d = g.z[k] - zc;
            envz[k] = std::exp(-2.0 * d * d / (spec.sigma_z * spec.sigma_z));
        }
        for (size_t k = 0; k < g.nz; ++k) {
            double* row = vlat.data() + k * g.nx;
            for (size_t i = 0; i < g.nx; ++i)
                row[i] = vpref * std::log1p(p0 * envz[k] * sin2[i]);
        }
    };

    auto half_phase = [&](double) {
        const double pref = -0.5 * dt / hbar;
        for (size_t k = 0; k < g.nz; ++k)
            for (size_t j = 0; j < g.ny; ++j) {
                auto* row = psi.psi.data() + g.idx(0, j, k);
                const double* vl = vlat.data() + k * g.nx;
                const double* vs =
                    opt.static_potential ? opt.static_potential->data() + g.idx(0, j, k) : nullptr;
                for (size_t i = 0; i < g.nx; ++i) {
                    double v = vl[i];
                    if (vs) v += vs[i];
                    const double th = pref * (v + u * std::norm(row[i]));
                    row[i] *= std::complex<double>(std::cos(th), std::sin(th));
                }
            }
    };

    auto boundary_ratio = [&]() {
        double peak = 0.0;
        for (const auto& a : psi.psi) peak = std::max(peak, std::norm(a));
        if (peak <= 0.0) return 0.0;
        double edge = 0.0;
        if (g.ny > 1)
            for (size_t k = 0; k < g.nz; ++k)
                for (size_t i = 0; i < g.nx; ++i) {
                    edge = std::max(edge, std::norm(psi.psi[g.idx(i, 0, k)]));
                    edge = std::max(edge, std::norm(psi.psi[g.idx(i, g.ny - 1, k)]));
                }
        if (g.nz > 1)
            for (size_t j = 0; j < g.ny; ++j)
                for (size_t i = 0; i < g.nx; ++i) {
                    edge = std::max(edge, std::norm(psi.psi[g.idx(i, j, 0)]));
                    edge = std::max(edge, std::norm(psi.psi[g.idx(i, j, g.nz - 1)]));
                }
        return edge / peak;
    };

    for (size_t s = 0; s < n_steps; ++s) {
        const double t_mid = psi.time + 0.5 * dt;
        if (p0 > 0.0) fill_lattice(t_mid);
        half_phase(t_mid);
        fft.forward();
        for (size_t i = 0; i < psi.psi.size(); ++i) psi.psi[i] *= kin[i];
        fft.inverse();
        half_phase(t_mid);
        psi.time += dt;

        if ((s + 1) % opt.energy_interval == 0 || s + 1 == n_steps) {
            out.boundary_ratio = std::max(out.boundary_ratio, boundary_ratio());
            if (opt.track_energy) {
                std::vector<double> vfull(g.size(), 0.0);
                if (p0 > 0.0) {
                    fill_lattice(psi.time);
                    for (size_t k = 0; k < g.nz; ++k)
                        for (size_t j = 0; j < g.ny; ++j) {
                            double* row = vfull.data() + g.idx(0, j, k);
                            const double* vl = vlat.data() + k * g.nx;
                            for (size_t i = 0; i < g.nx; ++i) row[i] = vl[i];
                        }
                }
                if (opt.static_potential)
                    for (size_t i = 0; i < vfull.size(); ++i)
                        vfull[i] += (*opt.static_potential)[i];
                out.energy_history.push_back(total_energy(psi, vfull, u, m));
            }
        }
    }

    out.norm_drift = norm0 > 0 ? std::abs(psi.norm() / norm0 - 1.0) : 0.0;
    out.boundary_contamination = out.boundary_ratio > 1e-6;
    out.psi = std::move(psi);
    return out;
}

namespace {

struct ProfileReadout {
    double fwhm, peak_per_um2;
    std::vector<double> x, profile;
    profile::FitResult fit;
};

ProfileReadout read_profile(const Wavefunction& wf, const lattice::LatticeSpec& spec,
                            bool sweep_mode) {
    const auto& g = wf.grid;
    const auto n2 = column_density_xz(wf);
    // cut at the beam-waist plane (the deposition plane), which in the cloud frame
    // sits at z0 - lattice_center(t); later slices are still mid-focus and earlier
    // ones already defocused, so the brightest slice would overstate the sharpness
    const double z_waist = spec.z0 - lattice::lattice_center(wf.time, spec);
    size_t kpk = 0;
    for (size_t k = 1; k < g.nz; ++k)
        if (std::abs(g.z[k] - z_waist) < std::abs(g.z[kpk] - z_waist)) kpk = k;
    const auto row = n2.begin() + kpk * g.nx;
    const size_t xpk = std::max_element(row, row + g.nx) - row;

    ProfileReadout out;
    out.x = g.x;
    out.profile.assign(row, row + g.nx);
    out.peak_per_um2 = out.profile[xpk] * 1e-12;

    if (sweep_mode) {
        const auto stats = profile::peak_stats(out.x, out.profile);
        out.fwhm = stats.mean_fwhm;
        return out;
    }
    // single central peak: blended-profile fit within a quarter wavelength
    const double window = spec.lambda / 4.0;
    std::vector<double> xs, ys;
    for (size_t i = 0; i < out.x.size(); ++i)
        if (std::abs(out.x[i] - g.x[xpk]) <= window) {
            xs.push_back(out.x[i]);
            ys.push_back(out.profile[i]);
        }
    out.fit = profile::fit_pseudo_voigt(xs, ys);
    out.fwhm = out.fit.fwhm;
    return out;
}

} // namespace

FocusResult focus_run(const FocusConfig& cfg) {
    auto spec = cfg.lattice;
    if (spec.v0 <= 0) throw std::invalid_argument("focus_run: approach speed must be > 0");

    GridSpec gs = cfg.grid;
    if (gs.Lx <= 0) gs.Lx = 16.0 * spec.lambda / 2.0;
    if (cfg.desk_2d) gs.ny = 1;
    const Grid3 grid = Grid3::make(gs.nx, gs.ny, gs.nz, gs.Lx, gs.Ly, gs.Lz);

    BECConfig bec = cfg.bec;
    if (cfg.desk_2d && bec.a_s > 0) {
        // effective-2D coupling u/(√(2π) l_y) expressed as a rescaled a_s
        const double mu0 = thomas_fermi_mu(cfg.trap, bec);
        const double ry = std::sqrt(2.0 * mu0 / bec.species.mass) / cfg.trap.omega_y;
        const double ly = ry / std::sqrt(7.0);  // rms width of the parabolic column
        bec.a_s /= std::sqrt(2.0 * std::numbers::pi) * ly / grid.dy;
    }

    FocusResult out;
    Wavefunction ground;
    if (cfg.precomputed_ground_state) {
        const auto& pg = cfg.precomputed_ground_state->grid;
        if (pg.nx != grid.nx || pg.ny != grid.ny || pg.nz != grid.nz || pg.Lx != grid.Lx ||
            pg.Ly != grid.Ly || pg.Lz != grid.Lz)
            throw std::invalid_argument("focus_run: precomputed ground state grid mismatch");
        ground = *cfg.precomputed_ground_state;
    } else if (bec.a_s > 0) {
        auto gsr = imaginary_time_ground_state(thomas_fermi_seed(grid, cfg.trap, bec),
                                               cfg.trap, bec, cfg.ground_state);
        out.ground_state_mu = gsr.mu;
        out.ground_state_virial = gsr.virial_residual;
        out.ground_state_energy = gsr.energy_per_atom;
        out.ground_state_iterations = gsr.iterations;
        ground = std::move(gsr.psi);
    } else {
        ground = thomas_fermi_seed(grid, cfg.trap, bec);
    }
    out.psi_ground = ground;
    if (cfg.ground_state_only) return out;

    BECConfig bec_prop = bec;
    if (cfg.interactions_off_at_release) bec_prop.a_s = 0.0;

    out.t_star = spec.g == 0.0
                     ? spec.z0 / spec.v0
                     : (-spec.v0 + std::sqrt(spec.v0 * spec.v0 + 2.0 * spec.g * spec.z0)) / spec.g;

    PropagateOptions popt;
    popt.n_threads = cfg.n_threads;
    double dt = cfg.dt_policy.dt;
    double prev_fwhm = 0.0;
    for (int h = 0; ; ++h) {
        popt.dt = dt;
        Wavefunction start = ground;  // fresh copy for every dt trial
        start.time = 0.0;
        auto prop = propagate(std::move(start), spec, bec_prop, out.t_star, popt);
        auto readout = read_profile(prop.psi, spec, cfg.sweep_mode);
        out.fwhm_vs_dt.push_back(readout.fwhm);
        out.fwhm = readout.fwhm;
        out.peak_density = readout.peak_per_um2;
        out.x = std::move(readout.x);
        out.profile = std::move(readout.profile);
        out.fit = readout.fit;
        out.dt_used = dt;
        out.norm_drift = prop.norm_drift;
        out.boundary_contamination = prop.boundary_contamination;
        out.psi_final = std::move(prop.psi);

        if (!cfg.dt_policy.convergence_study || h >= cfg.dt_policy.max_halvings) break;
        if (h > 0 && std::abs(readout.fwhm - prev_fwhm) < cfg.dt_policy.fwhm_rtol * prev_fwhm)
            break;
        prev_fwhm = readout.fwhm;
        dt *= 0.5;
    }
    return out;
}

} // namespace atomfocus::gpe
