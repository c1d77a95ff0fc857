#pragma once
#include <stdexcept>
#include <vector>

namespace atomfocus::rays {

// Dimensionless focal map of the harmonic-node lens:
//   u''(zeta) + xi * exp(-2 zeta^2) * u = 0,   zeta = z / sigma_z,
// integrated from zeta=+4 (u=1, u'=0, ray parallel to the axis) toward
// decreasing zeta until u crosses zero; a weak-lens ray that exits the
// envelope still converging is extended as a straight line to its crossing.
// The focal length F is the distance from the principal plane
// (back-extrapolation of the straight exit ray to the incoming height u=1)
// to the crossing plane, i.e. F = 1/u'(zeta_f).
struct FocalMapEntry {
    double xi;               // lens strength
    double F;                // focal length / sigma_z
    double zf;               // crossing plane / sigma_z
    double principal_plane;  // zeta of the principal plane
};

class NoCrossingError : public std::runtime_error {
public:
    NoCrossingError(double slope)
        : std::runtime_error("focus beyond window: ray exits without crossing"),
          exit_slope(slope) {}
    // du/ds along the propagation direction at the window edge; negative means
    // the ray still converges, but its crossing lies beyond 100 waists
    double exit_slope;
};

FocalMapEntry paraxial_trace(double xi);

double focal_length(double xi, double sigma_z);  // F(xi) * sigma_z, meters

// Uniformly spaced map entries over [xi_lo, xi_hi].
std::vector<FocalMapEntry> focal_map(double xi_lo, double xi_hi, double dxi);

// Central difference on neighboring map entries spaced by h (default 0.5).
double dF_dxi(double xi, double h = 0.5);

} // namespace atomfocus::rays
