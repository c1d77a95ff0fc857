#include "atomfocus/paraxial.hpp"

#include <cmath>

#include "atomfocus/ode.hpp"

namespace atomfocus::rays {

namespace {
constexpr double zeta_in = 4.0;
constexpr double zeta_out = -8.0;   // envelope is ~1e-56 here: the exit ray is straight
constexpr double zeta_far = -100.0; // extrapolated crossings beyond this are "no focus"
}

FocalMapEntry paraxial_trace(double xi) {
    if (xi <= 0.0) throw std::invalid_argument("paraxial_trace: xi must be positive");
    auto rhs = [xi](double zeta, const ode::State<2>& y, ode::State<2>& dy) {
        dy[0] = y[1];
        dy[1] = -xi * std::exp(-2.0 * zeta * zeta) * y[0];
    };
    auto crossing = [](double, const ode::State<2>& y) { return y[0]; };
    auto r = ode::integrate<2>(rhs, zeta_in, {1.0, 0.0}, zeta_out, 1e-12, 1e-14, crossing);
    // traveling toward decreasing zeta, u decreases through zero, so u' > 0
    if (r.event_hit) {
        const double F = 1.0 / r.y[1];
        return {xi, F, r.t, r.t + F};
    }
    // weak lens: extend the straight exit ray to its crossing
    const double u = r.y[0], slope = r.y[1];
    const double zf = slope > 0.0 ? r.t - u / slope : zeta_far;
    if (zf <= zeta_far) throw NoCrossingError(-slope);
    const double F = 1.0 / slope;
    return {xi, F, zf, zf + F};
}

double focal_length(double xi, double sigma_z) {
    return paraxial_trace(xi).F * sigma_z;
}

std::vector<FocalMapEntry> focal_map(double xi_lo, double xi_hi, double dxi) {
    if (dxi <= 0.0 || xi_hi < xi_lo) throw std::invalid_argument("focal_map: bad range");
    std::vector<FocalMapEntry> map;
    for (double xi = xi_lo; xi <= xi_hi + 0.5 * dxi; xi += dxi)
        map.push_back(paraxial_trace(xi));
    return map;
}

double dF_dxi(double xi, double h) {
    return (paraxial_trace(xi + h).F - paraxial_trace(xi - h).F) / (2.0 * h);
}

} // namespace atomfocus::rays
