#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qcs/geometry.hpp"
#include "qcs/rng.hpp"

using namespace qcs;

namespace {
double rel_err(double a, double b) { return std::fabs(a - b) / std::fabs(b); }
}  // namespace

TEST_CASE("equatorial ground station at the reference point") {
    GroundStationConfig gs;
    const BodyState st = propagate(gs, 0.0);
    CHECK(st.position_m.x == doctest::Approx(kEarthRadiusM));
    CHECK(st.position_m.y == doctest::Approx(0.0));
    CHECK(st.position_m.z == doctest::Approx(0.0));
    CHECK(st.velocity_mps.norm() ==
          doctest::Approx(kEarthSpinRadps * kEarthRadiusM).epsilon(1e-12));
}

TEST_CASE("satellite state: radius, speed, periodicity") {
    OrbitConfig orbit;
    orbit.altitude_m = 500e3;
    const BodyState s0 = propagate(orbit, 0.0);
    CHECK(rel_err(s0.position_m.norm(), orbit.radius_m()) < 1e-9);
    // Circular speed sqrt(GM/r); direct evaluation gives 7616.56 m/s.
    CHECK(s0.velocity_mps.norm() == doctest::Approx(7616.56).epsilon(1e-4));

    const BodyState s1 = propagate(orbit, orbit.period_s());
    CHECK(rel_err(s1.position_m.x, s0.position_m.x) < 1e-9);
    CHECK((s1.position_m - s0.position_m).norm() / orbit.radius_m() < 1e-9);
    CHECK((s1.velocity_mps - s0.velocity_mps).norm() / s0.velocity_mps.norm() < 1e-9);
}

TEST_CASE("body states stay on their spheres") {
    OrbitConfig orbit;
    orbit.altitude_m = 731e3;
    orbit.inclination_rad = deg2rad(51.6);
    orbit.raan_rad = deg2rad(123.0);
    orbit.initial_phase_rad = deg2rad(10.0);
    GroundStationConfig gs{deg2rad(40.7), deg2rad(-74.0), "nyc"};
    for (double t : {0.0, 313.0, 5000.5, 86000.0}) {
        CHECK(rel_err(propagate(orbit, t).position_m.norm(), orbit.radius_m()) < 1e-9);
        CHECK(rel_err(propagate(gs, t).position_m.norm(), kEarthRadiusM) < 1e-9);
    }
}

TEST_CASE("overhead co-rotating pass: zero range rate, K sentinel") {
    // Equatorial orbit over an equatorial station: both velocities are
    // tangential, so the radial rate vanishes identically.
    OrbitConfig orbit;
    orbit.altitude_m = 500e3;
    orbit.inclination_rad = 0.0;
    GroundStationConfig gs;
    const GeometryState g = link_state_at(orbit, gs, 0.0);
    CHECK(g.link_distance_m == doctest::Approx(500e3));
    CHECK(std::fabs(g.v_rel_rad_mps) < 1e-9);
    CHECK(std::isinf(g.k_factor));
    CHECK(g.zenith_angle_rad == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(g.visible);
}

TEST_CASE("stationary bodies have zero relative radial velocity") {
    BodyState sat{{kEarthRadiusM + 500e3, 0.0, 0.0}, {0.0, 0.0, 0.0}, 0.0};
    BodyState gs{{kEarthRadiusM, 100e3, 0.0}, {0.0, 0.0, 0.0}, 0.0};
    const GeometryState g = link_geometry(sat, gs);
    CHECK(g.v_rel_rad_mps == 0.0);
    CHECK(std::isinf(g.k_factor));
}

TEST_CASE("coincident bodies rejected") {
    BodyState a{{kEarthRadiusM, 0.0, 0.0}, {}, 0.0};
    CHECK_THROWS_AS(link_geometry(a, a), std::invalid_argument);
}

TEST_CASE("in-plane K factor closed form") {
    SUBCASE("theta -> 0 returns the infinity sentinel") {
        CHECK(std::isinf(k_factor_inplane(0.0, 500e3)));
    }
    SUBCASE("reference point: 2 degrees, 500 km") {
        // Independent evaluation: K = 97497.85, optimal window 4.875e-5 s.
        const double k = k_factor_inplane(deg2rad(2.0), 500e3);
        CHECK(k == doctest::Approx(97497.85).epsilon(1e-6));
        CHECK(k * 0.5e-9 == doctest::Approx(4.8e-5).epsilon(0.05));
    }
    SUBCASE("monotonically decreasing in theta0 out to the horizon") {
        // dK/dtheta vanishes at cos(theta) = R_E/r, i.e. the horizon angle
        // (~22 deg at 500 km); K decreases over the whole visible range.
        const double horizon_deg = rad2deg(std::acos(kEarthRadiusM / (kEarthRadiusM + 500e3)));
        double prev = k_factor_inplane(deg2rad(0.25), 500e3);
        for (double deg = 0.5; deg < horizon_deg; deg += 0.25) {
            const double k = k_factor_inplane(deg2rad(deg), 500e3);
            CHECK(k < prev);
            prev = k;
        }
    }
}

TEST_CASE("link_geometry reproduces the in-plane K over random samples") {
    // Polar orbit along a fixed meridian with the station on that meridian:
    // Earth spin is perpendicular to the line of sight, so the general
    // range rate reduces to the in-plane form exactly.
    Rng rng(20240811);
    for (int i = 0; i < 100; ++i) {
        const double theta_deg = 0.2 + 44.0 * rng.uniform();
        const double h = 300e3 + 1200e3 * rng.uniform();
        OrbitConfig orbit;
        orbit.altitude_m = h;
        orbit.inclination_rad = deg2rad(90.0);
        orbit.initial_phase_rad = 0.0;
        GroundStationConfig gs;
        gs.latitude_rad = -deg2rad(theta_deg);
        gs.longitude_rad = 0.0;
        const GeometryState g = link_state_at(orbit, gs, 0.0);
        const double k_ref = k_factor_inplane(deg2rad(theta_deg), h);
        CHECK(rel_err(g.k_factor, k_ref) < 1e-9);
        CHECK(g.boresight_angle_rad == doctest::Approx(deg2rad(theta_deg)).epsilon(1e-9));
    }
}

TEST_CASE("zenith angle agrees with the circular-orbit cosine relation") {
    Rng rng(7);
    for (int i = 0; i < 100; ++i) {
        const double h = 400e3 + 1000e3 * rng.uniform();
        OrbitConfig orbit;
        orbit.altitude_m = h;
        orbit.inclination_rad = deg2rad(90.0);
        GroundStationConfig gs;
        gs.latitude_rad = -deg2rad(0.1 + 18.0 * rng.uniform());
        const GeometryState g = link_state_at(orbit, gs, 0.0);
        const double L = g.link_distance_m;
        const double cz = h / L - (L * L - h * h) / (2.0 * kEarthRadiusM * L);
        CHECK(std::fabs(std::cos(g.zenith_angle_rad) - cz) < 1e-9);
    }
}

TEST_CASE("range-rate bound and sign change at closest approach") {
    OrbitConfig orbit;
    orbit.altitude_m = 500e3;
    orbit.inclination_rad = deg2rad(90.0);
    GroundStationConfig gs{deg2rad(5.0), deg2rad(3.0), ""};

    // |v_rel_rad| <= |v_sat| + |v_gs| for any epoch pair.
    Rng rng(99);
    for (int i = 0; i < 200; ++i) {
        const double t = 86400.0 * rng.uniform();
        const BodyState sat = propagate(orbit, t);
        const BodyState st = propagate(gs, t);
        const GeometryState g = link_geometry(sat, st);
        CHECK(std::fabs(g.v_rel_rad_mps) <=
              sat.velocity_mps.norm() + st.velocity_mps.norm() + 1e-9);
        CHECK(g.k_factor >= 1.0);
    }

    // Bracket the first pass's minimum link distance and check the sign flip.
    double t_min = 0.0, best = 1e18;
    for (double t = 0.0; t < 3000.0; t += 1.0) {
        const double L = link_state_at(orbit, gs, t).link_distance_m;
        if (L < best) {
            best = L;
            t_min = t;
        }
    }
    const GeometryState before = link_state_at(orbit, gs, t_min - 30.0);
    const GeometryState after = link_state_at(orbit, gs, t_min + 30.0);
    CHECK(before.v_rel_rad_mps < 0.0);
    CHECK(after.v_rel_rad_mps > 0.0);
}

TEST_CASE("common rotation about the Earth's axis is a symmetry") {
    OrbitConfig orbit;
    orbit.altitude_m = 500e3;
    orbit.inclination_rad = deg2rad(97.0);
    orbit.raan_rad = deg2rad(12.0);
    orbit.initial_phase_rad = deg2rad(33.0);
    GroundStationConfig gs{deg2rad(40.7), deg2rad(-74.0), ""};

    const GeometryState base = link_state_at(orbit, gs, 500.0);
    for (double shift_deg : {37.0, 120.0, -75.0}) {
        OrbitConfig o2 = orbit;
        o2.raan_rad += deg2rad(shift_deg);
        GroundStationConfig g2 = gs;
        g2.longitude_rad += deg2rad(shift_deg);
        const GeometryState rot = link_state_at(o2, g2, 500.0);
        CHECK(rel_err(rot.link_distance_m, base.link_distance_m) < 1e-9);
        CHECK(std::fabs(rot.zenith_angle_rad - base.zenith_angle_rad) < 1e-9);
        CHECK(std::fabs(rot.v_rel_rad_mps - base.v_rel_rad_mps) < 1e-6);
    }
}
