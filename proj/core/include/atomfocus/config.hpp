#pragma once
#include <stdexcept>
#include <string>
#include <vector>

#include "atomfocus/gpe.hpp"
#include "atomfocus/lattice.hpp"

namespace atomfocus::io {

// Parse/validation failure; the message always starts with the offending
// key path (e.g. "lattice.sigma_z: must be > 0").
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class LatticeDrive { xi, power, intensity };
enum class RunMode { classical, gpe, budget, sweep, ground_state, analyze };
enum class Interactions { pair, on, off_at_release, off };
enum class FitModel { gaussian, pseudo_voigt };

// Sectioned key-value experiment description. Fields hold the canonical
// storage units noted per member; parse_config applies all unit conversions
// and resolves the lattice drive (xi <-> P0 <-> I0) so all three are usable.
struct ExperimentConfig {
    // [species]
    std::string species_name = "Rb87";

    // [lattice]
    double sigma_z = 10e-6;            // m
    double lambda = 16 * 780.027e-9;   // m
    double delta_ghz = 200.0;          // GHz, cyclic
    LatticeDrive drive = LatticeDrive::xi;
    double xi = 0;                     // dimensionless; resolved
    double p0 = 0;                     // W; resolved
    double i0 = 0;                     // W/m^2; resolved
    double z0 = 20e-6;                 // m
    double g = 0;                      // m/s^2

    // [bec]
    double n_atoms = 1e5;
    double a_s_a0 = 100.0;             // units of the Bohr radius
    double f_x = 10.0, f_y = 70.0, f_z = 70.0;  // Hz, cyclic trap frequencies
    double kick = 0.01;                // m/s
    Interactions interactions = Interactions::pair;
    double dv_z = 0.1791e-2;           // m/s, longitudinal spread for budget mode
    double dv_x = 0.0264e-2;           // m/s, transverse spread for budget mode

    // [grid]  (0 = auto)
    std::size_t nx = 0, ny = 0, nz = 0;
    double Lx = 0, Ly = 0, Lz = 0;     // m

    // [analysis]
    FitModel fit = FitModel::pseudo_voigt;
    double threshold = 0.36787944117144233;  // peak_stats cutoff, fraction of max

    // [run]
    RunMode mode = RunMode::gpe;
    std::string output_dir = "out";
    double dt = 1e-6;                  // s
    bool dt_convergence = false;
    std::size_t n_rays = 62400;
    double slit_lo = 0, slit_hi = 0;   // m; both 0 = auto (one lattice period)
    int threads = 1;
    int dim = 3;                       // 3, or 2 for the collapsed-y desk model
    bool save_snapshots = false;

    // [sweep]
    std::vector<double> kicks;         // m/s
    std::vector<double> powers;        // W; empty = optimal power per kick

    // not a config key; set by the CLI for mode=analyze
    std::string analyze_input;

    // ---- derived views -----------------------------------------------------
    phys::Species species() const { return phys::rb87_d2_defaults(); }
    double delta_ang() const { return phys::detuning_angular(delta_ghz * 1e9); }
    double a_s() const { return a_s_a0 * phys::bohr_radius; }
    double hbark_velocity() const;     // one D2 photon recoil, m/s

    lattice::LatticeSpec lattice_spec() const;
    gpe::TrapConfig trap() const;
    gpe::BECConfig bec() const;
    gpe::FocusConfig focus_config() const;  // everything but the sweep lists
};

// Parses the documented sectioned key-value schema. Unknown sections/keys,
// missing units on dimensioned values, duplicate keys, conflicting or absent
// lattice drive, and negative physical quantities all throw ConfigError with
// the key path in the message.
ExperimentConfig parse_config(const std::string& text);

// Canonical text form with every default materialized; parse(serialize(c))
// reproduces c exactly (values are emitted with round-trip precision in the
// storage units above).
std::string serialize_config(const ExperimentConfig& cfg);

ExperimentConfig load_config_file(const std::string& path);

} // namespace atomfocus::io
