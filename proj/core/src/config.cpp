#include "atomfocus/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace atomfocus::io {
namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    auto e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

enum class Kind { none, length, time, freq_ghz, freq_hz, power, intensity, velocity, accel, scat_len };

// factor tables convert to the storage unit of each kind; the canonical
// (serialized) unit always has factor exactly 1 so round-trips are bitwise.
double unit_factor(Kind kind, const std::string& unit, const std::string& path,
                   const phys::Species& sp) {
    struct Entry { const char* name; double factor; };
    auto lookup = [&](std::initializer_list<Entry> table, const char* expect) {
        for (const auto& e : table)
            if (unit == e.name) return e.factor;
        fail(path, "unknown unit '" + unit + "' (expected " + expect + ")");
    };
    switch (kind) {
    case Kind::none:
        fail(path, "value takes no unit (got '" + unit + "')");
    case Kind::length:
        return lookup({{"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6}, {"µm", 1e-6},
                       {"nm", 1e-9}, {"lambda_D2", sp.lambda_res}},
                      "a length, e.g. '10 um' or '16 lambda_D2'");
    case Kind::time:
        return lookup({{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"µs", 1e-6}, {"ns", 1e-9}},
                      "a time, e.g. '1 us'");
    case Kind::freq_ghz:
        return lookup({{"GHz", 1.0}, {"MHz", 1e-3}, {"kHz", 1e-6}, {"Hz", 1e-9}},
                      "a frequency, e.g. '200 GHz'");
    case Kind::freq_hz:
        return lookup({{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}},
                      "a frequency, e.g. '10 Hz'");
    case Kind::power:
        return lookup({{"W", 1.0}, {"mW", 1e-3}, {"uW", 1e-6}, {"µW", 1e-6}, {"nW", 1e-9}},
                      "a power, e.g. '0.0688 uW'");
    case Kind::intensity:
        return lookup({{"W/m2", 1.0}, {"W/m^2", 1.0}, {"kW/m2", 1e3}, {"kW/m^2", 1e3},
                       {"W/cm2", 1e4}, {"W/cm^2", 1e4}, {"mW/cm2", 10.0}, {"mW/cm^2", 10.0}},
                      "an intensity, e.g. '1752 W/m2'");
    case Kind::velocity:
        return lookup({{"m/s", 1.0}, {"cm/s", 1e-2}, {"mm/s", 1e-3}, {"um/s", 1e-6},
                       {"µm/s", 1e-6},
                       {"hbark", phys::hbar * (2.0 * std::numbers::pi / sp.lambda_res) / sp.mass}},
                      "a velocity, e.g. '1 cm/s' or '16 hbark'");
    case Kind::accel:
        return lookup({{"m/s2", 1.0}, {"m/s^2", 1.0}}, "an acceleration, e.g. '9.81 m/s2'");
    case Kind::scat_len:
        return lookup({{"a0", 1.0}, {"nm", 1e-9 / phys::bohr_radius}, {"m", 1.0 / phys::bohr_radius}},
                      "a scattering length, e.g. '100 a0'");
    }
    fail(path, "internal: unhandled unit kind");
}

double parse_number(const std::string& tok, const std::string& path) {
    const char* c = tok.c_str();
    char* end = nullptr;
    double v = std::strtod(c, &end);
    if (end == c || *end != '\0')
        fail(path, "not a number: '" + tok + "'");
    if (!std::isfinite(v))
        fail(path, "non-finite value");
    return v;
}

// "value [unit]" with the unit required on nonzero dimensioned values
double parse_quantity(const std::string& raw, Kind kind, const std::string& path,
                      const phys::Species& sp) {
    std::istringstream ss(raw);
    std::string num, unit, extra;
    ss >> num >> unit >> extra;
    if (!extra.empty())
        fail(path, "trailing text '" + extra + "'");
    double v = parse_number(num, path);
    if (unit.empty()) {
        if (kind != Kind::none && v != 0.0)
            fail(path, "missing unit on '" + raw + "'");
        return v;
    }
    return v * unit_factor(kind, unit, path, sp);
}

std::vector<double> parse_list(const std::string& raw, Kind kind, const std::string& path,
                               const phys::Species& sp) {
    std::string cleaned = raw;
    for (auto& ch : cleaned)
        if (ch == ',') ch = ' ';
    std::istringstream ss(cleaned);
    std::vector<std::string> toks;
    for (std::string t; ss >> t;) toks.push_back(t);
    if (toks.empty())
        fail(path, "empty list");
    double factor = 1.0;
    // one optional trailing unit applies to every element
    if (!toks.empty() && !std::isdigit(static_cast<unsigned char>(toks.back()[0])) &&
        toks.back()[0] != '-' && toks.back()[0] != '+' && toks.back()[0] != '.') {
        factor = unit_factor(kind, toks.back(), path, sp);
        toks.pop_back();
        if (toks.empty())
            fail(path, "list has a unit but no values");
    } else if (kind != Kind::none) {
        fail(path, "missing unit on list '" + raw + "'");
    }
    std::vector<double> out;
    out.reserve(toks.size());
    for (const auto& t : toks)
        out.push_back(parse_number(t, path) * factor);
    return out;
}

struct RawConfig {
    std::map<std::string, std::string> kv;  // "section.key" -> value text
    bool has(const std::string& path) const { return kv.count(path) != 0; }
    // take() consumes; whatever is left at the end is an unknown key
    std::string take(const std::string& path) {
        auto it = kv.find(path);
        std::string v = it->second;
        kv.erase(it);
        return v;
    }
};

RawConfig tokenize(const std::string& text) {
    static const char* sections[] = {"species", "lattice", "bec", "grid", "analysis",
                                     "run", "sweep"};
    RawConfig raw;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos)
            line.erase(pos);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header '"
                                  + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            bool known = false;
            for (const char* s : sections) known |= section == s;
            if (!known)
                throw ConfigError(section + ": unknown section");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value', got '"
                              + line + "'");
        if (section.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": key outside any [section]");
        std::string key = trim(line.substr(0, eq));
        std::string path = section + "." + key;
        if (raw.has(path))
            fail(path, "duplicate key");
        raw.kv[path] = trim(line.substr(eq + 1));
    }
    return raw;
}

void require_positive(double v, const std::string& path) {
    if (!(v > 0)) fail(path, "must be > 0 (got " + std::to_string(v) + ")");
}

void require_nonneg(double v, const std::string& path) {
    if (v < 0) fail(path, "must be >= 0 (got " + std::to_string(v) + ")");
}

std::size_t parse_count_or_auto(const std::string& raw, const std::string& path) {
    if (raw == "auto") return 0;
    double v = parse_number(raw, path);
    if (v < 0 || v != std::floor(v))
        fail(path, "must be a non-negative integer or 'auto'");
    auto n = static_cast<std::size_t>(v);
    if (n != 0 && (n & (n - 1)) != 0)
        fail(path, "must be a power of two (got " + raw + ")");
    return n;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

double ExperimentConfig::hbark_velocity() const {
    const auto sp = species();
    return phys::hbar * (2.0 * std::numbers::pi / sp.lambda_res) / sp.mass;
}

lattice::LatticeSpec ExperimentConfig::lattice_spec() const {
    lattice::LatticeSpec s;
    s.I0 = i0;
    s.sigma_z = sigma_z;
    s.lambda = lambda;
    s.delta_ang = delta_ang();
    s.species = species();
    s.z0 = z0;
    s.g = g;
    s.v0 = kick;
    return s;
}

gpe::TrapConfig ExperimentConfig::trap() const {
    constexpr double tau = 2.0 * std::numbers::pi;
    return {tau * f_x, tau * f_y, tau * f_z};
}

gpe::BECConfig ExperimentConfig::bec() const {
    gpe::BECConfig b;
    b.n_atoms = n_atoms;
    b.a_s = interactions == Interactions::off ? 0.0 : a_s();
    b.species = species();
    return b;
}

gpe::FocusConfig ExperimentConfig::focus_config() const {
    gpe::FocusConfig fc;
    if (nx) fc.grid.nx = nx;
    if (ny) fc.grid.ny = ny;
    if (nz) fc.grid.nz = nz;
    if (Lx > 0) fc.grid.Lx = Lx;
    if (Ly > 0) fc.grid.Ly = Ly;
    if (Lz > 0) fc.grid.Lz = Lz;
    fc.trap = trap();
    fc.bec = bec();
    fc.lattice = lattice_spec();
    fc.interactions_off_at_release = interactions == Interactions::off_at_release;
    fc.dt_policy.dt = dt;
    fc.dt_policy.convergence_study = dt_convergence;
    fc.desk_2d = dim == 2;
    fc.n_threads = threads;
    return fc;
}

ExperimentConfig parse_config(const std::string& text) {
    RawConfig raw = tokenize(text);
    ExperimentConfig c;
    const auto sp = c.species();

    auto num = [&](const char* path, Kind kind, double& dst) {
        if (raw.has(path)) dst = parse_quantity(raw.take(path), kind, path, sp);
    };
    auto str = [&](const char* path, std::string& dst) {
        if (raw.has(path)) dst = raw.take(path);
    };
    auto flag = [&](const char* path, bool& dst) {
        if (!raw.has(path)) return;
        std::string v = raw.take(path);
        if (v == "on" || v == "true") dst = true;
        else if (v == "off" || v == "false") dst = false;
        else fail(path, "expected on/off (got '" + v + "')");
    };

    str("species.name", c.species_name);
    if (c.species_name != "Rb87")
        fail("species.name", "only Rb87 is supported (got '" + c.species_name + "')");

    num("lattice.sigma_z", Kind::length, c.sigma_z);
    num("lattice.lambda", Kind::length, c.lambda);
    num("lattice.delta", Kind::freq_ghz, c.delta_ghz);
    num("lattice.z0", Kind::length, c.z0);
    num("lattice.g", Kind::accel, c.g);
    require_positive(c.sigma_z, "lattice.sigma_z");
    require_positive(c.lambda, "lattice.lambda");
    if (c.delta_ghz == 0) fail("lattice.delta", "must be nonzero");
    require_nonneg(c.z0, "lattice.z0");
    require_nonneg(c.g, "lattice.g");

    // exactly one of the three drive keys
    {
        const char* drives[] = {"lattice.xi", "lattice.P0", "lattice.I0"};
        std::string present;
        int n_present = 0;
        for (const char* d : drives)
            if (raw.has(d)) {
                ++n_present;
                present += present.empty() ? d : std::string(", ") + d;
            }
        if (n_present == 0)
            throw ConfigError("lattice: exactly one of xi, P0, I0 is required (got none)");
        if (n_present > 1)
            throw ConfigError(present + ": give exactly one lattice drive");
        if (raw.has("lattice.xi")) {
            c.drive = LatticeDrive::xi;
            c.xi = parse_quantity(raw.take("lattice.xi"), Kind::none, "lattice.xi", sp);
            require_positive(c.xi, "lattice.xi");
        } else if (raw.has("lattice.P0")) {
            c.drive = LatticeDrive::power;
            c.p0 = parse_quantity(raw.take("lattice.P0"), Kind::power, "lattice.P0", sp);
            require_positive(c.p0, "lattice.P0");
        } else {
            c.drive = LatticeDrive::intensity;
            c.i0 = parse_quantity(raw.take("lattice.I0"), Kind::intensity, "lattice.I0", sp);
            require_positive(c.i0, "lattice.I0");
        }
    }

    num("bec.n_atoms", Kind::none, c.n_atoms);
    num("bec.a_s", Kind::scat_len, c.a_s_a0);
    num("bec.f_x", Kind::freq_hz, c.f_x);
    num("bec.f_y", Kind::freq_hz, c.f_y);
    num("bec.f_z", Kind::freq_hz, c.f_z);
    num("bec.kick", Kind::velocity, c.kick);
    num("bec.dv_z", Kind::velocity, c.dv_z);
    num("bec.dv_x", Kind::velocity, c.dv_x);
    require_positive(c.n_atoms, "bec.n_atoms");
    require_nonneg(c.a_s_a0, "bec.a_s");
    require_nonneg(c.f_x, "bec.f_x");
    require_nonneg(c.f_y, "bec.f_y");
    require_nonneg(c.f_z, "bec.f_z");
    require_nonneg(c.kick, "bec.kick");
    require_nonneg(c.dv_z, "bec.dv_z");
    require_nonneg(c.dv_x, "bec.dv_x");
    if (raw.has("bec.interactions")) {
        std::string v = raw.take("bec.interactions");
        if (v == "pair") c.interactions = Interactions::pair;
        else if (v == "on") c.interactions = Interactions::on;
        else if (v == "off_at_release") c.interactions = Interactions::off_at_release;
        else if (v == "off") c.interactions = Interactions::off;
        else fail("bec.interactions", "expected pair/on/off_at_release/off (got '" + v + "')");
    }

    for (auto [path, dst] : {std::pair{"grid.nx", &c.nx}, {"grid.ny", &c.ny}, {"grid.nz", &c.nz}})
        if (raw.has(path)) *dst = parse_count_or_auto(raw.take(path), path);
    for (auto [path, dst] : {std::pair{"grid.Lx", &c.Lx}, {"grid.Ly", &c.Ly}, {"grid.Lz", &c.Lz}})
        if (raw.has(path)) {
            std::string v = raw.take(path);
            *dst = v == "auto" ? 0.0 : parse_quantity(v, Kind::length, path, sp);
            require_nonneg(*dst, path);
        }

    if (raw.has("analysis.fit")) {
        std::string v = raw.take("analysis.fit");
        if (v == "gaussian") c.fit = FitModel::gaussian;
        else if (v == "pseudo_voigt") c.fit = FitModel::pseudo_voigt;
        else fail("analysis.fit", "expected gaussian/pseudo_voigt (got '" + v + "')");
    }
    num("analysis.threshold", Kind::none, c.threshold);
    if (!(c.threshold > 0 && c.threshold < 1))
        fail("analysis.threshold", "must lie in (0, 1)");

    if (!raw.has("run.mode"))
        throw ConfigError("run.mode: missing required key (classical/gpe/budget/sweep)");
    {
        std::string v = raw.take("run.mode");
        if (v == "classical") c.mode = RunMode::classical;
        else if (v == "gpe") c.mode = RunMode::gpe;
        else if (v == "budget") c.mode = RunMode::budget;
        else if (v == "sweep") c.mode = RunMode::sweep;
        else if (v == "ground-state") c.mode = RunMode::ground_state;
        else if (v == "analyze") c.mode = RunMode::analyze;
        else fail("run.mode", "expected classical/gpe/budget/sweep (got '" + v + "')");
    }
    str("run.output_dir", c.output_dir);
    num("run.dt", Kind::time, c.dt);
    require_positive(c.dt, "run.dt");
    flag("run.dt_convergence", c.dt_convergence);
    if (raw.has("run.n_rays")) {
        double v = parse_number(raw.take("run.n_rays"), "run.n_rays");
        if (v < 1 || v != std::floor(v)) fail("run.n_rays", "must be a positive integer");
        c.n_rays = static_cast<std::size_t>(v);
    }
    for (auto [path, dst] : {std::pair{"run.slit_lo", &c.slit_lo}, {"run.slit_hi", &c.slit_hi}})
        if (raw.has(path)) {
            std::string v = raw.take(path);
            *dst = v == "auto" ? 0.0 : parse_quantity(v, Kind::length, path, sp);
        }
    if ((c.slit_lo != 0 || c.slit_hi != 0) && !(c.slit_lo < c.slit_hi))
        throw ConfigError("run.slit_lo: must be < run.slit_hi");
    if (raw.has("run.threads")) {
        double v = parse_number(raw.take("run.threads"), "run.threads");
        if (v < 1 || v != std::floor(v)) fail("run.threads", "must be a positive integer");
        c.threads = static_cast<int>(v);
    }
    if (raw.has("run.dim")) {
        double v = parse_number(raw.take("run.dim"), "run.dim");
        if (v != 2 && v != 3) fail("run.dim", "must be 2 or 3");
        c.dim = static_cast<int>(v);
    }
    flag("run.save_snapshots", c.save_snapshots);

    if (raw.has("sweep.kicks"))
        c.kicks = parse_list(raw.take("sweep.kicks"), Kind::velocity, "sweep.kicks", sp);
    if (raw.has("sweep.powers"))
        c.powers = parse_list(raw.take("sweep.powers"), Kind::power, "sweep.powers", sp);
    for (double v : c.kicks) require_positive(v, "sweep.kicks");
    for (double v : c.powers) require_positive(v, "sweep.powers");
    if (c.mode == RunMode::sweep && c.kicks.empty() && c.powers.empty())
        throw ConfigError("sweep.kicks: missing required key (a sweep needs kicks and/or powers)");

    if (!raw.kv.empty())
        fail(raw.kv.begin()->first, "unknown key");

    // resolve the lattice drive so xi, P0 and I0 are all available
    {
        lattice::LatticeSpec s = c.lattice_spec();
        const double E0 = 0.5 * sp.mass * c.kick * c.kick;
        switch (c.drive) {
        case LatticeDrive::xi:
            if (c.kick == 0)
                fail("lattice.xi", "resolving xi to a power needs a nonzero bec.kick");
            c.i0 = lattice::peak_intensity_for_xi({c.xi, E0}, s);
            c.p0 = lattice::power_from_peak_intensity(c.i0, c.sigma_z);
            break;
        case LatticeDrive::power:
            c.i0 = lattice::peak_intensity_from_power(c.p0, c.sigma_z);
            if (c.kick > 0) c.xi = lattice::xi_from_power(c.p0, s, E0);
            break;
        case LatticeDrive::intensity:
            c.p0 = lattice::power_from_peak_intensity(c.i0, c.sigma_z);
            if (c.kick > 0) c.xi = lattice::xi_from_power(c.p0, s, E0);
            break;
        }
    }
    return c;
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "[species]\nname = " << c.species_name << "\n\n";

    out << "[lattice]\n";
    out << "sigma_z = " << fmt(c.sigma_z) << " m\n";
    out << "lambda = " << fmt(c.lambda) << " m\n";
    out << "delta = " << fmt(c.delta_ghz) << " GHz\n";
    switch (c.drive) {
    case LatticeDrive::xi: out << "xi = " << fmt(c.xi) << "\n"; break;
    case LatticeDrive::power: out << "P0 = " << fmt(c.p0) << " W\n"; break;
    case LatticeDrive::intensity: out << "I0 = " << fmt(c.i0) << " W/m2\n"; break;
    }
    out << "z0 = " << fmt(c.z0) << " m\n";
    out << "g = " << fmt(c.g) << " m/s2\n\n";

    out << "[bec]\n";
    out << "n_atoms = " << fmt(c.n_atoms) << "\n";
    out << "a_s = " << fmt(c.a_s_a0) << " a0\n";
    out << "f_x = " << fmt(c.f_x) << " Hz\n";
    out << "f_y = " << fmt(c.f_y) << " Hz\n";
    out << "f_z = " << fmt(c.f_z) << " Hz\n";
    out << "kick = " << fmt(c.kick) << " m/s\n";
    const char* inter = c.interactions == Interactions::pair ? "pair"
                        : c.interactions == Interactions::on ? "on"
                        : c.interactions == Interactions::off_at_release ? "off_at_release"
                                                                         : "off";
    out << "interactions = " << inter << "\n";
    out << "dv_z = " << fmt(c.dv_z) << " m/s\n";
    out << "dv_x = " << fmt(c.dv_x) << " m/s\n\n";

    out << "[grid]\n";
    auto count = [&](const char* k, std::size_t v) {
        out << k << " = ";
        if (v) out << v; else out << "auto";
        out << "\n";
    };
    auto extent = [&](const char* k, double v) {
        out << k << " = ";
        if (v > 0) out << fmt(v) << " m"; else out << "auto";
        out << "\n";
    };
    count("nx", c.nx); count("ny", c.ny); count("nz", c.nz);
    extent("Lx", c.Lx); extent("Ly", c.Ly); extent("Lz", c.Lz);
    out << "\n[analysis]\n";
    out << "fit = " << (c.fit == FitModel::gaussian ? "gaussian" : "pseudo_voigt") << "\n";
    out << "threshold = " << fmt(c.threshold) << "\n\n";

    out << "[run]\n";
    const char* mode = c.mode == RunMode::classical ? "classical"
                       : c.mode == RunMode::gpe ? "gpe"
                       : c.mode == RunMode::budget ? "budget"
                       : c.mode == RunMode::sweep ? "sweep"
                       : c.mode == RunMode::ground_state ? "ground-state"
                                                         : "analyze";
    out << "mode = " << mode << "\n";
    out << "output_dir = " << c.output_dir << "\n";
    out << "dt = " << fmt(c.dt) << " s\n";
    out << "dt_convergence = " << (c.dt_convergence ? "on" : "off") << "\n";
    out << "n_rays = " << c.n_rays << "\n";
    if (c.slit_lo == 0 && c.slit_hi == 0) {
        out << "slit_lo = auto\nslit_hi = auto\n";
    } else {
        out << "slit_lo = " << fmt(c.slit_lo) << " m\n";
        out << "slit_hi = " << fmt(c.slit_hi) << " m\n";
    }
    out << "threads = " << c.threads << "\n";
    out << "dim = " << c.dim << "\n";
    out << "save_snapshots = " << (c.save_snapshots ? "on" : "off") << "\n";

    if (!c.kicks.empty() || !c.powers.empty()) {
        out << "\n[sweep]\n";
        auto list = [&](const char* k, const std::vector<double>& v, const char* unit) {
            if (v.empty()) return;
            out << k << " =";
            for (double x : v) out << " " << fmt(x);
            out << " " << unit << "\n";
        };
        list("kicks", c.kicks, "m/s");
        list("powers", c.powers, "W");
    }
    return out.str();
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError(path + ": cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace atomfocus::io
