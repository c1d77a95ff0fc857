#include "atomfocus/rays.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "atomfocus/ode.hpp"

namespace atomfocus::rays {

namespace {

// state: {x, z, vx, vz}
struct Newton {
    const lattice::LatticeSpec& spec;
    double inv_m;
    void operator()(double, const ode::State<4>& y, ode::State<4>& dy) const {
        const auto grad = lattice::dipole_gradient(spec, y[0], y[1]);
        dy[0] = y[2];
        dy[1] = y[3];
        dy[2] = -grad.dU_dx * inv_m;
        dy[3] = -grad.dU_dz * inv_m - spec.g;
    }
};

struct PlaneEvent {
    double z_f;
    double operator()(double, const ode::State<4>& y) const { return y[1] - z_f; }
};

double time_budget(double z_start, double z_f, double v_z, double sigma_z) {
    return 10.0 * ((z_start - z_f) + sigma_z) / v_z;
}

// final transverse position only; no sample recording
std::pair<double, bool> trace_arrival(double x0, double z_start, double v_z,
                                      const lattice::LatticeSpec& spec, double z_f,
                                      double rtol) {
    Newton rhs{spec, 1.0 / spec.species.mass};
    ode::State<4> y0{x0, z_start, 0.0, -v_z};
    auto res = ode::integrate<4>(rhs, 0.0, y0,
                                 time_budget(z_start, z_f, v_z, spec.sigma_z), rtol,
                                 1e-18, PlaneEvent{z_f}, 1e-7);
    return {res.y[0], res.event_hit};
}

} // namespace

double Trajectory::energy_drift(const lattice::LatticeSpec& spec) const {
    if (samples.empty()) return 0.0;
    const double m = spec.species.mass;
    auto energy = [&](const TrajectorySample& s) {
        return 0.5 * m * (s.vx * s.vx + s.vz * s.vz) +
               lattice::dipole_potential(spec, s.x, s.z) + m * spec.g * s.z;
    };
    const double e0 = energy(samples.front());
    double worst = 0.0;
    for (const auto& s : samples) worst = std::max(worst, std::abs(energy(s) - e0));
    return worst / std::abs(e0);
}

Trajectory trace_full(double x0, double z_start, double v_z,
                      const lattice::LatticeSpec& spec, double z_f, double rtol) {
    if (v_z <= 0.0) throw std::invalid_argument("trace_full: v_z must be > 0");
    if (z_start <= z_f) throw std::invalid_argument("trace_full: z_start must sit above z_f");

    Newton rhs{spec, 1.0 / spec.species.mass};
    ode::State<4> y0{x0, z_start, 0.0, -v_z};
    Trajectory traj;
    auto record = [&traj](double t, const ode::State<4>& y) {
        traj.samples.push_back({t, y[0], y[1], y[2], y[3]});
    };
    auto res = ode::integrate<4>(rhs, 0.0, y0,
                                 time_budget(z_start, z_f, v_z, spec.sigma_z), rtol,
                                 1e-18, PlaneEvent{z_f}, 1e-7, 100000000, record);
    traj.reached_plane = res.event_hit;
    traj.n_steps = res.n_steps;
    return traj;
}

DepositionProfile deposit(std::size_t n_rays, double slit_lo, double slit_hi,
                          double z_f, const lattice::LatticeSpec& spec, int n_threads) {
    if (n_rays < 100) throw std::invalid_argument("deposit: need at least 100 rays");
    if (!(slit_hi > slit_lo)) throw std::invalid_argument("deposit: empty slit");
    if (spec.v0 <= 0.0) throw std::invalid_argument("deposit: spec.v0 must be > 0");

    const double width = slit_hi - slit_lo;
    std::vector<double> arrival(n_rays);
    std::vector<char> hit(n_rays, 0);

    auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const double x0 = slit_lo + (i + 0.5) * width / n_rays;
            auto [xf, ok] = trace_arrival(x0, spec.z0, spec.v0, spec, z_f, 1e-10);
            arrival[i] = xf;
            hit[i] = ok ? 1 : 0;
        }
    };

    const int nt = std::max(1, n_threads);
    if (nt == 1) {
        work(0, n_rays);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(nt);
        const std::size_t chunk = (n_rays + nt - 1) / nt;
        for (int t = 0; t < nt; ++t) {
            const std::size_t lo = t * chunk;
            if (lo >= n_rays) break;
            pool.emplace_back([&, t, lo] {
                try {
                    work(lo, std::min(n_rays, lo + chunk));
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    DepositionProfile out;
    out.n_rays = n_rays;
    for (std::size_t i = 0; i < n_rays; ++i) {
        if (hit[i]) out.x_f.push_back(arrival[i]);
        else ++out.n_reflected;
    }

    constexpr std::size_t n_bins = 50;
    out.histogram.edges.resize(n_bins + 1);
    out.histogram.counts.assign(n_bins, 0.0);
    for (std::size_t b = 0; b <= n_bins; ++b)
        out.histogram.edges[b] = slit_lo + b * width / n_bins;
    for (double xf : out.x_f) {
        const double u = (xf - slit_lo) / width;
        if (u < 0.0 || u > 1.0) continue;
        const auto b = std::min(n_bins - 1, static_cast<std::size_t>(u * n_bins));
        out.histogram.counts[b] += 1.0;
    }

    if (out.x_f.size() >= 100) {
        out.kde = profile::kde(out.x_f);
        out.fwhm = out.kde.fwhm;
    } else {
        out.fwhm = 0.0;  // too few arrivals for a density estimate
    }
    return out;
}

} // namespace atomfocus::rays
