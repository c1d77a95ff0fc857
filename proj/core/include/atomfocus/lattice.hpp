#pragma once
#include "atomfocus/constants.hpp"

namespace atomfocus::lattice {

// Standing-wave lens: I(x,z) = I0 exp(-2 z^2/sigma_z^2) sin^2(kx), plus the
// rigid fall trajectory z(t) of the lattice center relative to the cloud.
struct LatticeSpec {
    double I0 = 0.0;        // W/m^2, peak intensity
    double sigma_z = 0.0;   // m, 1/e^2 beam radius
    double lambda = 0.0;    // m, lattice wavelength
    double delta_ang = 0.0; // 1/s, angular detuning
    phys::Species species = phys::rb87_d2_defaults();
    double z0 = 0.0;        // m, initial separation between cloud and lattice center
    double g = 0.0;         // m/s^2, gravity along the fall
    double v0 = 0.0;        // m/s, initial closing velocity

    double k() const { return 2.0 * std::numbers::pi / lambda; }
};

struct FocusSpec {
    double xi;  // dimensionless lens strength q^2 sigma_z^2
    double E0;  // J, atom kinetic energy 0.5 m v_z^2
};

double intensity(const LatticeSpec& s, double x, double z_rel);

// p such that U = (hbar*delta/2) ln(1+p):  p = [g^2/(g^2+4d^2)] I/I_sat
double saturation_parameter(const LatticeSpec& s, double x, double z_rel);
double peak_saturation(const LatticeSpec& s);  // p at an antinode on axis

double dipole_potential(const LatticeSpec& s, double x, double z_rel);  // J

struct PotentialGradient { double dU_dx, dU_dz; };  // J/m
PotentialGradient dipole_gradient(const LatticeSpec& s, double x, double z_rel);

double peak_intensity_from_power(double P0, double sigma_z);  // I0 = 8 P0 / (pi sigma_z^2)
double power_from_peak_intensity(double I0, double sigma_z);

// Power needed for a given lens strength; throws std::invalid_argument at delta==0.
double power_for_xi(const FocusSpec& f, const LatticeSpec& s);
double xi_from_power(double P0, const LatticeSpec& s, double E0);
double peak_intensity_for_xi(const FocusSpec& f, const LatticeSpec& s);

double lattice_center(double t, const LatticeSpec& s);  // z(t) = g t^2/2 + v0 t
double envelope(const LatticeSpec& s, double t);        // exp(-2 (z0 - z(t))^2 / sigma_z^2)

} // namespace atomfocus::lattice
