#include "atomfocus/aberration.hpp"

#include <cmath>
#include <stdexcept>

namespace atomfocus::aberration {

double diffraction_fwhm(double f, double v_z, double lambda, const phys::Species& sp,
                        double beta) {
    if (f <= 0 || v_z <= 0 || lambda <= 0)
        throw std::invalid_argument("diffraction_fwhm: inputs must be positive");
    return 2.0 * beta * f * phys::h_planck / (sp.mass * v_z * lambda);
}

double chromatic_fwhm(double xi, double dF_dxi, double sigma_z, double lambda, double f,
                      double dv_z, double v_z) {
    if (v_z <= 0) throw std::invalid_argument("chromatic_fwhm: v_z must be positive");
    return std::abs(-2.0 * xi * std::atan(lambda / (2.0 * f)) * (sigma_z * dF_dxi) * dv_z / v_z);
}

double angular_fwhm(double f, double dv_x, double v_z) {
    if (v_z <= 0) throw std::invalid_argument("angular_fwhm: v_z must be positive");
    return f * std::atan(dv_x / v_z);
}

AberrationBudget assemble_budget(double sph, double diff, double chrom, double ang) {
    if (sph < 0 || diff < 0 || chrom < 0 || ang < 0)
        throw std::invalid_argument("assemble_budget: contributions must be nonnegative");
    AberrationBudget b;
    b.sph = sph;
    b.diff = diff;
    b.chrom = chrom;
    b.ang = ang;
    b.total_non = sph + diff;
    b.total_int = sph + diff + chrom + ang;
    return b;
}

} // namespace atomfocus::aberration
