#pragma once
#include "atomfocus/constants.hpp"

namespace atomfocus::aberration {

// Additive FWHM contributions; totals are plain sums, no quadrature.
struct AberrationBudget {
    double sph = 0, diff = 0, chrom = 0, ang = 0;  // m
    double total_non = 0;  // sph + diff
    double total_int = 0;  // sph + diff + chrom + ang
};

// Rayleigh diffraction floor through a slit of D = lambda/2:
// 1.76 f h / (m v_z lambda). beta=0.88 (rectangular aperture); pass
// beta=1.22 for the circular-aperture variant.
double diffraction_fwhm(double f, double v_z, double lambda, const phys::Species& sp,
                        double beta = 0.88);

// |-2 xi arctan(lambda/2f) (sigma_z dF/dxi) dv_z / v_z|; reported as magnitude.
double chromatic_fwhm(double xi, double dF_dxi, double sigma_z, double lambda, double f,
                      double dv_z, double v_z);

// f * arctan(dv_x / v_z)
double angular_fwhm(double f, double dv_x, double v_z);

AberrationBudget assemble_budget(double sph, double diff, double chrom, double ang);

} // namespace atomfocus::aberration
