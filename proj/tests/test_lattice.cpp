#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "atomfocus/lattice.hpp"

using namespace atomfocus;

namespace {

lattice::LatticeSpec base_spec(double lambda, double sigma_z, double delta_ghz) {
    lattice::LatticeSpec s;
    s.lambda = lambda;
    s.sigma_z = sigma_z;
    s.delta_ang = phys::detuning_angular(delta_ghz * 1e9);
    return s;
}

} // namespace

TEST_CASE("power for a given lens strength matches the published operating points") {
    // long-wavelength point: xi=5.37, lambda=312um, sigma_z=100um, v_z=1cm/s
    auto s = base_spec(312e-6, 100e-6, 200.0);
    const double E0 = 0.5 * s.species.mass * 1e-2 * 1e-2;
    const double P = lattice::power_for_xi({5.37, E0}, s);
    CHECK(P == doctest::Approx(43.018e-6).epsilon(0.005));

    // table operating point: lambda=12.48um, sigma_z=10um
    auto t = base_spec(16 * 780.027e-9, 10e-6, 200.0);
    const double P1 = lattice::power_for_xi({5.37, E0}, t);
    CHECK(P1 == doctest::Approx(0.0688e-6).epsilon(0.005));
    const double I1 = lattice::peak_intensity_for_xi({5.37, E0}, t);
    CHECK(I1 == doctest::Approx(1.752e3).epsilon(0.005));
}

TEST_CASE("power <-> intensity <-> xi round trips") {
    auto s = base_spec(16 * 780.027e-9, 10e-6, 200.0);
    const double E0 = 0.5 * s.species.mass * 1e-2 * 1e-2;
    const double P = lattice::power_for_xi({5.37, E0}, s);
    const double I = lattice::peak_intensity_from_power(P, s.sigma_z);
    CHECK(lattice::power_from_peak_intensity(I, s.sigma_z) == doctest::Approx(P).epsilon(1e-12));
    CHECK(lattice::xi_from_power(P, s, E0) == doctest::Approx(5.37).epsilon(1e-9));
    CHECK(I == doctest::Approx(8.0 * P / (std::numbers::pi * s.sigma_z * s.sigma_z)));
}

TEST_CASE("intensity profile: gaussian envelope times sin^2") {
    auto s = base_spec(12.48e-6, 10e-6, 200.0);
    s.I0 = 1000.0;
    const double k = s.k();
    CHECK(lattice::intensity(s, 0.25 * s.lambda, 0.0) == doctest::Approx(1000.0));  // antinode
    CHECK(lattice::intensity(s, 0.0, 0.0) == doctest::Approx(0.0));                 // node
    CHECK(lattice::intensity(s, 0.25 * s.lambda, s.sigma_z) ==
          doctest::Approx(1000.0 * std::exp(-2.0)));
    CHECK(lattice::intensity(s, 1e-7, 0.0) ==
          doctest::Approx(1000.0 * std::sin(k * 1e-7) * std::sin(k * 1e-7)));
}

TEST_CASE("dipole potential gradient matches a numeric derivative") {
    auto s = base_spec(12.48e-6, 10e-6, 200.0);
    s.I0 = 1752.0;
    const double x = 1.3e-6, z = 4.0e-6, h = 1e-10;
    const auto g = lattice::dipole_gradient(s, x, z);
    const double dx_num =
        (lattice::dipole_potential(s, x + h, z) - lattice::dipole_potential(s, x - h, z)) / (2 * h);
    const double dz_num =
        (lattice::dipole_potential(s, x, z + h) - lattice::dipole_potential(s, x, z - h)) / (2 * h);
    CHECK(g.dU_dx == doctest::Approx(dx_num).epsilon(1e-5));
    CHECK(g.dU_dz == doctest::Approx(dz_num).epsilon(1e-5));
}

TEST_CASE("saturation parameter and blue-detuned sign") {
    auto s = base_spec(12.48e-6, 10e-6, 200.0);
    s.I0 = 1752.0;
    const double p = lattice::peak_saturation(s);
    CHECK(p == doctest::Approx(lattice::saturation_parameter(s, 0.25 * s.lambda, 0.0)));
    CHECK(p > 0);
    // blue detuning (delta > 0) repels atoms from intensity: U > 0 off-node
    CHECK(lattice::dipole_potential(s, 0.25 * s.lambda, 0.0) > 0);
    CHECK(lattice::dipole_potential(s, 0.0, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("lattice center follows the rigid fall and the envelope tracks it") {
    lattice::LatticeSpec s = base_spec(12.48e-6, 10e-6, 200.0);
    s.z0 = 20e-6;
    s.v0 = 1e-2;
    s.g = 9.81;
    const double t = 1e-3;
    CHECK(lattice::lattice_center(t, s) == doctest::Approx(0.5 * 9.81 * t * t + 1e-2 * t));
    const double zrel = s.z0 - lattice::lattice_center(t, s);
    CHECK(lattice::envelope(s, t) ==
          doctest::Approx(std::exp(-2.0 * zrel * zrel / (s.sigma_z * s.sigma_z))));
    // the envelope peaks when the center reaches z0
    CHECK(lattice::envelope(s, 0.0) < lattice::envelope(s, 1.8e-3));
}

TEST_CASE("power_for_xi rejects zero detuning") {
    auto s = base_spec(12.48e-6, 10e-6, 200.0);
    s.delta_ang = 0.0;
    CHECK_THROWS_AS(lattice::power_for_xi({5.37, 1e-30}, s), std::invalid_argument);
}
