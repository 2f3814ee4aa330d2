#include "qcs/link_budget.hpp"

#include <cmath>
#include <stdexcept>

namespace qcs {

double free_space_transmittance(double link_distance_m, double tx_radius_m,
                                double rx_radius_m, double wavelength_m,
                                double fill_fraction) {
    const double w0 = fill_fraction * tx_radius_m;
    const double rayleigh = kPi * w0 * w0 / wavelength_m;
    const double spread = link_distance_m / rayleigh;
    const double w2 = w0 * w0 * (1.0 + spread * spread);
    return 1.0 - std::exp(-2.0 * rx_radius_m * rx_radius_m / w2);
}

double atmospheric_transmittance(double link_distance_m, double altitude_m,
                                 double eta_atm_zenith) {
    const double L = link_distance_m, h = altitude_m;
    const double cz = h / L - (L * L - h * h) / (2.0 * kEarthRadiusM * L);
    if (cz > 1.0 + 1e-9 || cz < -1.0 - 1e-9)
        throw std::domain_error("atmospheric_transmittance: inconsistent L/h geometry");
    if (cz <= 0.0) return 0.0;  // at or below the horizon
    return std::pow(eta_atm_zenith, 1.0 / std::min(cz, 1.0));
}

double atmospheric_transmittance_at(double zenith_angle_rad, double eta_atm_zenith) {
    const double cz = std::cos(zenith_angle_rad);
    if (cz <= 0.0) return 0.0;
    return std::pow(eta_atm_zenith, 1.0 / cz);
}

ChannelEfficiency channel_efficiency(LinkDirection direction, const GeometryState& geom,
                                     const HardwareParams& hw) {
    ChannelEfficiency eff;
    eff.direction = direction;
    if (!geom.visible) {
        eff.below_horizon = true;
        return eff;
    }
    const bool up = direction == LinkDirection::Uplink;
    const double tx = up ? hw.tx_radius_gs_m : hw.tx_radius_sat_m;
    const double rx = up ? hw.rx_radius_sat_m : hw.rx_radius_gs_m;
    eff.eta_fs = free_space_transmittance(geom.link_distance_m, tx, rx, hw.wavelength_m,
                                          hw.fill_fraction);
    eff.eta_atm = atmospheric_transmittance_at(geom.zenith_angle_rad, hw.eta_atm_zenith);
    eff.eta_total = eff.eta_fs * eff.eta_atm * hw.det_eff_sat * hw.det_eff_gs;
    return eff;
}

}  // namespace qcs
