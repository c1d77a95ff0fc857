#pragma once
#include <numbers>

namespace atomfocus::phys {

struct Species {
    double mass;        // kg
    double lambda_res;  // m, D2 resonance wavelength
    double gamma;       // angular decay rate, 1/s
    double I_sat;       // W/m^2, saturation intensity
};

// 87Rb D2 line. gamma is consumed as an angular rate; detunings quoted in
// (cyclic) Hz must pass through detuning_angular() before entering any formula.
constexpr Species rb87_d2_defaults() {
    return Species{1.44e-25, 780.027e-9, 3.7e7, 16.5};
}

inline constexpr double hbar = 1.054571817e-34;          // J s
inline constexpr double h_planck = 2.0 * std::numbers::pi * hbar;
inline constexpr double bohr_radius = 5.29177210903e-11; // m
inline constexpr double g_earth = 9.81;                  // m/s^2

constexpr double detuning_angular(double delta_cyclic_hz) {
    return 2.0 * std::numbers::pi * delta_cyclic_hz;
}

} // namespace atomfocus::phys
