#include "atomfocus/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "atomfocus/aberration.hpp"
#include "atomfocus/paraxial.hpp"
#include "atomfocus/rays.hpp"
#include "atomfocus/snapshot.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace atomfocus::io {
namespace {

std::string hex16(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

class RunWriter {
public:
    RunWriter(const ExperimentConfig& cfg, std::string mode_name, int verbosity)
        : dir_(cfg.output_dir), verbosity_(verbosity) {
        fs::create_directories(dir_);
        manifest_.mode = std::move(mode_name);
        manifest_.config_text = serialize_config(cfg);
        manifest_.version = code_version;
        start_ = std::chrono::steady_clock::now();
    }

    void log(const std::string& line) const {
        if (verbosity_ >= 1) std::fprintf(stderr, "[atomfocus] %s\n", line.c_str());
    }

    void warn(std::string w) {
        log("warning: " + w);
        manifest_.warnings.push_back(std::move(w));
    }

    void write_text(const std::string& name, const std::string& content) {
        const fs::path p = fs::path(dir_) / name;
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        out << content;
        out.close();
        if (!out) throw std::runtime_error(p.string() + ": write failed");
        manifest_.outputs.push_back(
            {name, static_cast<std::uint64_t>(fs::file_size(p)),
             "fnv1a64:" + hex16(fnv1a64_file(p.string()))});
    }

    void write_snapshot_file(const std::string& name, const gpe::Wavefunction& wf) {
        const fs::path p = fs::path(dir_) / name;
        write_snapshot(p.string(), wf);
        manifest_.outputs.push_back(
            {name, static_cast<std::uint64_t>(fs::file_size(p)),
             "fnv1a64:" + hex16(fnv1a64_file(p.string()))});
    }

    RunManifest finish() {
        manifest_.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        const fs::path p = fs::path(dir_) / "manifest.json";
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        out << manifest_.to_json() << "\n";
        if (!out) throw std::runtime_error(p.string() + ": write failed");
        return manifest_;
    }

    RunManifest manifest_;

private:
    std::string dir_;
    int verbosity_;
    std::chrono::steady_clock::time_point start_;
};

json fit_json(const profile::FitResult& fit) {
    return {{"model", fit.model == profile::FitResult::Model::gaussian ? "gaussian"
                                                                       : "pseudo_voigt"},
            {"amplitude", fit.amplitude},
            {"center_um", fit.center * 1e6},
            {"fwhm_um", fit.fwhm * 1e6},
            {"eta", fit.eta},
            {"offset", fit.offset},
            {"residual", fit.residual}};
}

std::pair<double, double> slit_range(const ExperimentConfig& cfg) {
    if (cfg.slit_lo == 0 && cfg.slit_hi == 0)
        return {-cfg.lambda / 4.0, cfg.lambda / 4.0};  // one period, node-centered
    return {cfg.slit_lo, cfg.slit_hi};
}

std::string deposit_csv(const rays::DepositionProfile& dep) {
    std::ostringstream csv;
    csv << "x_um,count,kde_per_um\n";
    const auto& h = dep.histogram;
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
        const double center = 0.5 * (h.edges[b] + h.edges[b + 1]);
        // KDE is normalized per meter; report per µm on the bin centers
        double k = 0.0;
        const auto& gx = dep.kde.grid;
        if (center <= gx.front()) k = dep.kde.density.front();
        else if (center >= gx.back()) k = dep.kde.density.back();
        else {
            auto it = std::lower_bound(gx.begin(), gx.end(), center);
            const std::size_t i = static_cast<std::size_t>(it - gx.begin());
            const double t = (center - gx[i - 1]) / (gx[i] - gx[i - 1]);
            k = dep.kde.density[i - 1] + t * (dep.kde.density[i] - dep.kde.density[i - 1]);
        }
        csv << num(center * 1e6) << "," << num(h.counts[b]) << "," << num(k * 1e-6) << "\n";
    }
    return csv.str();
}

rays::DepositionProfile run_deposit(const ExperimentConfig& cfg, RunWriter& w) {
    const auto [lo, hi] = slit_range(cfg);
    w.log("tracing " + std::to_string(cfg.n_rays) + " rays");
    auto dep = rays::deposit(cfg.n_rays, lo, hi, 0.0, cfg.lattice_spec(), cfg.threads);
    if (dep.n_reflected > 0)
        w.warn(std::to_string(dep.n_reflected) + " rays reflected before the deposition plane");
    if (dep.kde.resolution_limited)
        w.warn("deposition FWHM is at the KDE resolution floor");
    return dep;
}

void mode_classical(const ExperimentConfig& cfg, RunWriter& w) {
    auto dep = run_deposit(cfg, w);
    w.write_text("profile.csv", deposit_csv(dep));
    json s{{"mode", "classical"},
           {"fwhm_um", dep.fwhm * 1e6},
           {"kde_bandwidth_um", dep.kde.bandwidth * 1e6},
           {"peak_position_um", dep.kde.peak_position * 1e6},
           {"resolution_limited", dep.kde.resolution_limited},
           {"n_rays", dep.n_rays},
           {"n_reflected", dep.n_reflected}};
    w.write_text("summary.json", s.dump(2) + "\n");
}

void mode_budget(const ExperimentConfig& cfg, RunWriter& w) {
    const auto sp = cfg.species();
    const double v_z = cfg.kick;
    if (v_z <= 0) throw std::runtime_error("budget mode needs a nonzero bec.kick");
    const double f = rays::focal_length(cfg.xi, cfg.sigma_z);
    const double dfdxi = rays::dF_dxi(cfg.xi);

    auto dep = run_deposit(cfg, w);
    const double sph = dep.fwhm;
    const double diff = aberration::diffraction_fwhm(f, v_z, cfg.lambda, sp);
    const double chrom =
        aberration::chromatic_fwhm(cfg.xi, dfdxi, cfg.sigma_z, cfg.lambda, f, cfg.dv_z, v_z);
    const double ang = aberration::angular_fwhm(f, cfg.dv_x, v_z);
    const auto budget = aberration::assemble_budget(sph, diff, chrom, ang);

    w.write_text("profile.csv", deposit_csv(dep));
    json s{{"mode", "budget"},
           {"xi", cfg.xi},
           {"focal_length_um", f * 1e6},
           {"dF_dxi", dfdxi},
           {"spherical_um", budget.sph * 1e6},
           {"diffraction_um", budget.diff * 1e6},
           {"chromatic_um", budget.chrom * 1e6},
           {"angular_um", budget.ang * 1e6},
           {"total_non_um", budget.total_non * 1e6},
           {"total_int_um", budget.total_int * 1e6},
           {"dv_z_cm_s", cfg.dv_z * 1e2},
           {"dv_x_cm_s", cfg.dv_x * 1e2}};
    w.write_text("summary.json", s.dump(2) + "\n");
}

json focus_json(const gpe::FocusResult& r) {
    return {{"fwhm_um", r.fwhm * 1e6},
            {"peak_density_per_um2", r.peak_density},
            {"fit", fit_json(r.fit)},
            {"t_star_ms", r.t_star * 1e3},
            {"dt_used_s", r.dt_used},
            {"fwhm_vs_dt_um", [&] {
                 json a = json::array();
                 for (double v : r.fwhm_vs_dt) a.push_back(v * 1e6);
                 return a;
             }()},
            {"ground_state_mu_J", r.ground_state_mu},
            {"norm_drift", r.norm_drift},
            {"boundary_contamination", r.boundary_contamination}};
}

std::string profile_csv(const gpe::FocusResult& a, const gpe::FocusResult* b) {
    std::ostringstream csv;
    csv << (b ? "x_um,density_int_per_um2,density_non_per_um2\n" : "x_um,density_per_um2\n");
    for (std::size_t i = 0; i < a.x.size(); ++i) {
        csv << num(a.x[i] * 1e6) << "," << num(a.profile[i] * 1e-12);
        if (b) csv << "," << num(b->profile[i] * 1e-12);
        csv << "\n";
    }
    return csv.str();
}

void check_focus_warnings(const gpe::FocusResult& r, const std::string& tag, RunWriter& w) {
    if (r.boundary_contamination)
        w.warn(tag + ": density reached the y/z grid boundary (contaminated expansion)");
    if (r.norm_drift > 1e-6)
        w.warn(tag + ": norm drift " + num(r.norm_drift) + " exceeds 1e-6");
    if (r.ground_state_virial >= 0.01 && r.ground_state_iterations > 0)
        w.warn(tag + ": ground-state virial residual " + num(r.ground_state_virial));
}

void mode_gpe(const ExperimentConfig& cfg, RunWriter& w) {
    auto fc = cfg.focus_config();
    if (cfg.interactions == Interactions::pair) {
        fc.interactions_off_at_release = false;
        w.log("interacting leg");
        auto r_int = gpe::focus_run(fc);
        check_focus_warnings(r_int, "interacting", w);

        auto fc_non = fc;
        fc_non.interactions_off_at_release = true;
        fc_non.precomputed_ground_state = &r_int.psi_ground;
        w.log("non-interacting leg (shared ground state)");
        auto r_non = gpe::focus_run(fc_non);
        check_focus_warnings(r_non, "non_interacting", w);

        w.write_text("profile.csv", profile_csv(r_int, &r_non));
        json s{{"mode", "gpe"},
               {"interacting", focus_json(r_int)},
               {"non_interacting", focus_json(r_non)},
               {"fwhm_ratio_int_over_non", r_int.fwhm / r_non.fwhm},
               {"ground_state_virial", r_int.ground_state_virial}};
        w.write_text("summary.json", s.dump(2) + "\n");
        if (cfg.save_snapshots) {
            w.write_snapshot_file("ground_state.snap", r_int.psi_ground);
            w.write_snapshot_file("final_int.snap", r_int.psi_final);
            w.write_snapshot_file("final_non.snap", r_non.psi_final);
        }
        return;
    }

    auto r = gpe::focus_run(fc);
    const char* tag = cfg.interactions == Interactions::on ? "interacting" : "non_interacting";
    check_focus_warnings(r, tag, w);
    w.write_text("profile.csv", profile_csv(r, nullptr));
    json s{{"mode", "gpe"}, {tag, focus_json(r)}, {"ground_state_virial", r.ground_state_virial}};
    w.write_text("summary.json", s.dump(2) + "\n");
    if (cfg.save_snapshots) {
        w.write_snapshot_file("ground_state.snap", r.psi_ground);
        w.write_snapshot_file("final.snap", r.psi_final);
    }
}

void mode_ground_state(const ExperimentConfig& cfg, RunWriter& w) {
    auto fc = cfg.focus_config();
    fc.ground_state_only = true;
    w.log("relaxing ground state");
    auto r = gpe::focus_run(fc);
    const double mu_tf = gpe::thomas_fermi_mu(fc.trap, fc.bec);
    json s{{"mode", "ground-state"},
           {"mu_J", r.ground_state_mu},
           {"mu_over_thomas_fermi", r.ground_state_mu / mu_tf},
           {"thomas_fermi_mu_J", mu_tf},
           {"virial_residual", r.ground_state_virial},
           {"energy_per_atom_J", r.ground_state_energy},
           {"iterations", r.ground_state_iterations}};
    w.write_text("summary.json", s.dump(2) + "\n");
    if (cfg.save_snapshots) w.write_snapshot_file("ground_state.snap", r.psi_ground);
    if (r.ground_state_virial >= 0.01 && fc.bec.a_s > 0)
        w.warn("ground-state virial residual " + num(r.ground_state_virial) + " is above 1%");
}

struct SweepPoint {
    double kick = 0;  // m/s
    double p0 = 0;    // W
    double i0 = 0;    // W/m^2
    double mean_fwhm = 0;
    double max_peak = 0;
    std::string status = "ok";
};

void mode_sweep(const ExperimentConfig& cfg, RunWriter& w) {
    const auto sp = cfg.species();
    std::vector<SweepPoint> points;
    const std::vector<double> kicks = cfg.kicks.empty() ? std::vector<double>{cfg.kick}
                                                        : cfg.kicks;
    for (double k : kicks) {
        if (cfg.powers.empty()) {
            // optimal-power point: hold xi, rescale the power with the kick energy
            SweepPoint p;
            p.kick = k;
            lattice::LatticeSpec s = cfg.lattice_spec();
            s.v0 = k;
            const double E0 = 0.5 * sp.mass * k * k;
            p.i0 = lattice::peak_intensity_for_xi({cfg.xi, E0}, s);
            p.p0 = lattice::power_from_peak_intensity(p.i0, cfg.sigma_z);
            points.push_back(p);
        } else {
            for (double pw : cfg.powers) {
                SweepPoint p;
                p.kick = k;
                p.p0 = pw;
                p.i0 = lattice::peak_intensity_from_power(pw, cfg.sigma_z);
                points.push_back(p);
            }
        }
    }

    w.log("sweep over " + std::to_string(points.size()) + " points");
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            auto& p = points[i];
            try {
                auto fc = cfg.focus_config();
                fc.lattice.v0 = p.kick;
                fc.lattice.I0 = p.i0;
                fc.sweep_mode = true;
                fc.n_threads = 1;  // the pool parallelizes across points
                if (cfg.interactions == Interactions::pair)
                    fc.interactions_off_at_release = false;
                auto r = gpe::focus_run(fc);
                p.mean_fwhm = r.fwhm;
                p.max_peak = r.peak_density;
            } catch (const std::exception& e) {
                p.status = std::string("error: ") + e.what();
            }
            std::lock_guard<std::mutex> lock(log_mutex);
            w.log("point " + std::to_string(i + 1) + "/" + std::to_string(points.size()) + " " +
                  p.status);
        }
    };
    const int n_workers = std::max(1, std::min<int>(cfg.threads, static_cast<int>(points.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < n_workers; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::ostringstream csv;
    csv << "kick_cm_s,P0_uW,I0_W_m2,mean_fwhm_um,max_peak_per_um2,status\n";
    json rows = json::array();
    for (const auto& p : points) {
        const bool ok = p.status == "ok";
        csv << num(p.kick * 1e2) << "," << num(p.p0 * 1e6) << "," << num(p.i0) << ","
            << (ok ? num(p.mean_fwhm * 1e6) : "") << "," << (ok ? num(p.max_peak) : "") << ","
            << "\"" << p.status << "\"\n";
        rows.push_back({{"kick_cm_s", p.kick * 1e2},
                        {"P0_uW", p.p0 * 1e6},
                        {"I0_W_m2", p.i0},
                        {"mean_fwhm_um", ok ? json(p.mean_fwhm * 1e6) : json()},
                        {"max_peak_per_um2", ok ? json(p.max_peak) : json()},
                        {"status", p.status}});
        if (!ok) w.warn("sweep point kick=" + num(p.kick * 1e2) + " cm/s failed: " + p.status);
    }
    w.write_text("sweep.csv", csv.str());
    json s{{"mode", "sweep"}, {"points", rows}};
    w.write_text("summary.json", s.dump(2) + "\n");
    w.warn("release assumption: trap switches off at t=0 and the lattice approaches from z0 "
           "regardless of separation");
}

void mode_analyze(const ExperimentConfig& cfg, RunWriter& w) {
    if (cfg.analyze_input.empty())
        throw std::runtime_error("analyze mode needs an input profile CSV (--input)");
    std::ifstream in(cfg.analyze_input);
    if (!in) throw std::runtime_error(cfg.analyze_input + ": cannot open");
    std::string header;
    std::getline(in, header);
    std::vector<double> x, y;
    for (std::string line; std::getline(in, line);) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double a, b;
        if (ss >> a >> b) {
            x.push_back(a * 1e-6);  // columns are in µm
            y.push_back(b);
        }
    }
    if (x.size() < 8)
        throw std::runtime_error(cfg.analyze_input + ": too few rows to fit");
    w.log("refitting " + std::to_string(x.size()) + " rows from " + cfg.analyze_input);

    json s{{"mode", "analyze"}, {"input", cfg.analyze_input}, {"rows", x.size()}};
    if (cfg.fit == FitModel::gaussian)
        s["fit"] = fit_json(profile::fit_gaussian(x, y));
    else
        s["fit"] = fit_json(profile::fit_pseudo_voigt(x, y));
    auto peaks = profile::peak_stats(x, y, cfg.threshold);
    json parr = json::array();
    for (const auto& p : peaks.peaks)
        parr.push_back({{"position_um", p.position * 1e6},
                        {"height", p.height},
                        {"fwhm_um", p.fwhm * 1e6}});
    s["peaks"] = parr;
    s["mean_fwhm_um"] = peaks.mean_fwhm * 1e6;
    w.write_text("summary.json", s.dump(2) + "\n");
}

} // namespace

std::string RunManifest::to_json() const {
    json j{{"tool", "atomfocus"},
           {"version", version},
           {"mode", mode},
           {"wall_seconds", wall_seconds},
           {"config", config_text},
           {"warnings", warnings}};
    json outs = json::array();
    for (const auto& o : outputs)
        outs.push_back({{"path", o.path}, {"bytes", o.bytes}, {"checksum", o.checksum}});
    j["outputs"] = outs;
    return j.dump(2);
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path + ": cannot open for checksum");
    std::uint64_t h = 14695981039346656037ull;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
        if (!in) break;
    }
    return h;
}

std::vector<std::string> verify_manifest(const RunManifest& m, const std::string& dir) {
    std::vector<std::string> bad;
    for (const auto& o : m.outputs) {
        const fs::path p = fs::path(dir) / o.path;
        std::error_code ec;
        const auto size = fs::file_size(p, ec);
        if (ec) {
            bad.push_back(o.path + ": missing");
            continue;
        }
        if (size != o.bytes) {
            bad.push_back(o.path + ": size mismatch");
            continue;
        }
        if ("fnv1a64:" + hex16(fnv1a64_file(p.string())) != o.checksum)
            bad.push_back(o.path + ": checksum mismatch");
    }
    return bad;
}

RunManifest run(const ExperimentConfig& cfg, int verbosity) {
    const char* mode_name = cfg.mode == RunMode::classical ? "classical"
                            : cfg.mode == RunMode::gpe ? "gpe"
                            : cfg.mode == RunMode::budget ? "budget"
                            : cfg.mode == RunMode::sweep ? "sweep"
                            : cfg.mode == RunMode::ground_state ? "ground-state"
                                                                : "analyze";
    RunWriter w(cfg, mode_name, verbosity);
    try {
        switch (cfg.mode) {
        case RunMode::classical: mode_classical(cfg, w); break;
        case RunMode::gpe: mode_gpe(cfg, w); break;
        case RunMode::budget: mode_budget(cfg, w); break;
        case RunMode::sweep: mode_sweep(cfg, w); break;
        case RunMode::ground_state: mode_ground_state(cfg, w); break;
        case RunMode::analyze: mode_analyze(cfg, w); break;
        }
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string(mode_name) + " run failed: " + e.what());
    }
    return w.finish();
}

} // namespace atomfocus::io
