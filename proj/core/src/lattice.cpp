#include "atomfocus/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace atomfocus::lattice {

namespace {
constexpr double pi = std::numbers::pi;

double line_factor(const LatticeSpec& s) {
    const double g2 = s.species.gamma * s.species.gamma;
    const double d2 = s.delta_ang * s.delta_ang;
    return g2 / (g2 + 4.0 * d2);
}
} // namespace

double intensity(const LatticeSpec& s, double x, double z_rel) {
    const double sx = std::sin(s.k() * x);
    return s.I0 * std::exp(-2.0 * z_rel * z_rel / (s.sigma_z * s.sigma_z)) * sx * sx;
}

double saturation_parameter(const LatticeSpec& s, double x, double z_rel) {
    return line_factor(s) * intensity(s, x, z_rel) / s.species.I_sat;
}

double peak_saturation(const LatticeSpec& s) {
    return line_factor(s) * s.I0 / s.species.I_sat;
}

double dipole_potential(const LatticeSpec& s, double x, double z_rel) {
    return 0.5 * phys::hbar * s.delta_ang * std::log1p(saturation_parameter(s, x, z_rel));
}

PotentialGradient dipole_gradient(const LatticeSpec& s, double x, double z_rel) {
    const double k = s.k();
    const double sz2 = s.sigma_z * s.sigma_z;
    const double env = std::exp(-2.0 * z_rel * z_rel / sz2);
    const double sx = std::sin(k * x);
    const double p0env = line_factor(s) * s.I0 / s.species.I_sat * env;
    const double p = p0env * sx * sx;
    const double pref = 0.5 * phys::hbar * s.delta_ang / (1.0 + p);
    return {pref * p0env * k * std::sin(2.0 * k * x),
            pref * p * (-4.0 * z_rel / sz2)};
}

double peak_intensity_from_power(double P0, double sigma_z) {
    return 8.0 * P0 / (pi * sigma_z * sigma_z);
}

double power_from_peak_intensity(double I0, double sigma_z) {
    return I0 * pi * sigma_z * sigma_z / 8.0;
}

double power_for_xi(const FocusSpec& f, const LatticeSpec& s) {
    if (s.delta_ang == 0.0)
        throw std::invalid_argument("power_for_xi: resonant beam, dipole formula invalid");
    const double g2 = s.species.gamma * s.species.gamma;
    const double d2 = s.delta_ang * s.delta_ang;
    const double k = s.k();
    return f.xi * (pi / 4.0) * (f.E0 / (phys::hbar * s.delta_ang)) *
           ((g2 + 4.0 * d2) / g2) * (s.species.I_sat / (k * k));
}

double xi_from_power(double P0, const LatticeSpec& s, double E0) {
    return P0 / power_for_xi({1.0, E0}, s);
}

double peak_intensity_for_xi(const FocusSpec& f, const LatticeSpec& s) {
    return peak_intensity_from_power(power_for_xi(f, s), s.sigma_z);
}

double lattice_center(double t, const LatticeSpec& s) {
    return 0.5 * s.g * t * t + s.v0 * t;
}

double envelope(const LatticeSpec& s, double t) {
    const double zc = s.z0 - lattice_center(t, s);
    return std::exp(-2.0 * zc * zc / (s.sigma_z * s.sigma_z));
}

} // namespace atomfocus::lattice
