#pragma once
#include <cstddef>
#include <vector>

namespace atomfocus::profile {

// Gaussian-kernel density estimate. Auto bandwidth: Silverman's rule of thumb
// h = 1.06 * min(sd, IQR/1.34) * n^(-1/5). FWHM is read off the curve by
// linear interpolation at half maximum. resolution_limited marks widths at or
// below the kernel floor (or a caller-supplied floor such as a bin width).
struct KdeResult {
    std::vector<double> grid;
    std::vector<double> density;      // integrates to 1
    double bandwidth = 0;
    double fwhm = 0;
    double peak_position = 0;
    double peak_density = 0;
    bool resolution_limited = false;
};

KdeResult kde(const std::vector<double>& samples, double bandwidth = 0,
              double resolution_floor = 0, std::size_t grid_points = 4001);

double silverman_bandwidth(const std::vector<double>& samples);

struct FitResult {
    enum class Model { gaussian, pseudo_voigt };
    Model model;
    double amplitude = 0;
    double center = 0;
    double sigma = 0;      // gaussian only
    double eta = 0;        // pseudo-voigt lorentzian fraction, in [0,1]
    double offset = 0;
    double fwhm = 0;       // gaussian: 2 sqrt(2 ln 2) sigma; pseudo-voigt: shared width
    double residual = 0;   // ||model - y|| / ||y - mean||
    int iterations = 0;
};

// Nonlinear least squares (Levenberg damping, numeric Jacobian).
// Initialization: center = argmax, amplitude = max-min, width from the raw
// half-power width, offset = min. Throws std::runtime_error on non-convergence.
FitResult fit_gaussian(const std::vector<double>& x, const std::vector<double>& y);

// Pseudo-Voigt: A * [eta * L(x;f) + (1-eta) * G(x;f)] + B with one shared
// width f; both components have FWHM = f, so the blend's FWHM is f for any
// eta (within <1% of a true Voigt profile of equal component widths).
FitResult fit_pseudo_voigt(const std::vector<double>& x, const std::vector<double>& y);

struct Peak {
    double position = 0;
    double height = 0;
    double fwhm = 0;
};

struct PeakSet {
    std::vector<Peak> peaks;
    double mean_fwhm = 0;
    double threshold = 0;  // fraction of the highest peak
};

// Local maxima at or above threshold*max, each refit in a +-window/2 slice
// around the peak; window = 0 picks half the smallest peak separation.
PeakSet peak_stats(const std::vector<double>& x, const std::vector<double>& y,
                   double threshold = 0.36787944117144233, double window = 0);

} // namespace atomfocus::profile
