#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qcs/link_budget.hpp"

using namespace qcs;

namespace {
// Table-style defaults used across the link tests.
HardwareParams table_hw() { return HardwareParams{}; }

GeometryState visible_geom(double L, double zeta_rad) {
    GeometryState g;
    g.link_distance_m = L;
    g.zenith_angle_rad = zeta_rad;
    g.visible = zeta_rad < kPi / 2.0;
    g.k_factor = 1e5;
    return g;
}
}  // namespace

TEST_CASE("free-space transmittance") {
    SUBCASE("zero-distance limit keeps only the waist truncation") {
        const double eta0 = free_space_transmittance(0.0, 0.6, 0.1, 810e-9, 0.8);
        CHECK(eta0 == doctest::Approx(1.0 - std::exp(-2.0 * 0.01 / (0.48 * 0.48))));
    }
    SUBCASE("uplink at 500 km matches the hand-evaluated value") {
        // w0 = 0.48 m, Rayleigh range 8.936e5 m -> eta = 0.063971.
        const double eta = free_space_transmittance(500e3, 0.6, 0.1, 810e-9, 0.8);
        CHECK(eta == doctest::Approx(0.063971).epsilon(1e-4));
    }
    SUBCASE("strictly decreasing in distance") {
        double prev = free_space_transmittance(1.0, 0.6, 0.1, 810e-9, 0.8);
        for (double L = 50e3; L <= 3000e3; L += 50e3) {
            const double eta = free_space_transmittance(L, 0.6, 0.1, 810e-9, 0.8);
            CHECK(eta < prev);
            CHECK(eta > 0.0);
            CHECK(eta <= 1.0);
            prev = eta;
        }
    }
}

TEST_CASE("atmospheric transmittance") {
    SUBCASE("overhead returns the zenith value exactly") {
        CHECK(atmospheric_transmittance(500e3, 500e3, 0.5) == doctest::Approx(0.5));
    }
    SUBCASE("below the horizon returns zero") {
        // 500 km altitude: the horizon sits at L = sqrt(r^2 - R_E^2) = 2573 km.
        CHECK(atmospheric_transmittance(2600e3, 500e3, 0.5) == 0.0);
        CHECK(atmospheric_transmittance_at(deg2rad(91.0), 0.5) == 0.0);
    }
    SUBCASE("slant path at 1500 km matches the secant law") {
        // cos(zeta) = 0.228693 -> 0.5^(1/0.228693) = 0.0482715.
        const double eta = atmospheric_transmittance(1500e3, 500e3, 0.5);
        CHECK(eta == doctest::Approx(0.0482715).epsilon(1e-5));
    }
    SUBCASE("inconsistent geometry rejected") {
        CHECK_THROWS_AS(atmospheric_transmittance(100e3, 500e3, 0.5), std::domain_error);
    }
}

TEST_CASE("channel efficiency") {
    SUBCASE("overhead uplink sits in the 20 dB class") {
        const GeometryState g = visible_geom(500e3, 0.0);
        const ChannelEfficiency eff = channel_efficiency(LinkDirection::Uplink, g, table_hw());
        const double db = -10.0 * std::log10(eff.eta_total);
        CHECK(db > 19.0);
        CHECK(db < 21.5);
        CHECK(eff.eta_total == doctest::Approx(eff.eta_fs * eff.eta_atm * 0.25));
    }
    SUBCASE("dead detector kills the channel") {
        HardwareParams hw = table_hw();
        hw.det_eff_sat = 0.0;
        const GeometryState g = visible_geom(700e3, deg2rad(30.0));
        CHECK(channel_efficiency(LinkDirection::Uplink, g, hw).eta_total == 0.0);
    }
    SUBCASE("below horizon flagged with zero efficiency") {
        const GeometryState g = visible_geom(2600e3, deg2rad(95.0));
        const ChannelEfficiency eff = channel_efficiency(LinkDirection::Uplink, g, table_hw());
        CHECK(eff.below_horizon);
        CHECK(eff.eta_total == 0.0);
    }
    SUBCASE("uplink never beats the downlink at the same geometry") {
        // The 10 cm receive aperture on the satellite dominates the uplink.
        for (double L = 500e3; L <= 2000e3; L += 100e3) {
            const double zeta = std::acos(std::min(
                1.0, 500e3 / L - (L * L - 500e3 * 500e3) / (2.0 * kEarthRadiusM * L)));
            const GeometryState g = visible_geom(L, zeta);
            const double up = channel_efficiency(LinkDirection::Uplink, g, table_hw()).eta_total;
            const double dn =
                channel_efficiency(LinkDirection::Downlink, g, table_hw()).eta_total;
            CHECK(up <= dn);
            CHECK(up >= 0.0);
            CHECK(dn <= 1.0);
            CHECK(std::isfinite(-10.0 * std::log10(up)));
        }
    }
}
