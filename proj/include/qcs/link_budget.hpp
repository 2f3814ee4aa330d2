#ifndef QCS_LINK_BUDGET_HPP
#define QCS_LINK_BUDGET_HPP

#include "qcs/geometry.hpp"

namespace qcs {

enum class LinkDirection { Uplink, Downlink };

/**
 * Telescope and detector parameters for both ends of the optical link.
 * One transmit/receive radius per platform; the Gaussian beam is launched
 * with waist w0 = fill_fraction * tx_radius.
 */
struct HardwareParams {
    double wavelength_m = 810e-9;
    double tx_radius_sat_m = 0.10;
    double tx_radius_gs_m = 0.60;
    double rx_radius_sat_m = 0.10;
    double rx_radius_gs_m = 0.60;
    double det_eff_sat = 0.5;
    double det_eff_gs = 0.5;
    double eta_atm_zenith = 0.6;
    double fill_fraction = 0.8;
};

/** Per-link transmittance breakdown. Factors multiply into eta_total. */
struct ChannelEfficiency {
    double eta_fs = 0.0;
    double eta_atm = 0.0;
    double eta_total = 0.0;
    LinkDirection direction = LinkDirection::Uplink;
    bool below_horizon = false;
};

/**
 * Diffraction-limited single-photon transmittance of a Gaussian beam
 * truncated by a circular receive aperture:
 *   eta = 1 - exp(-2 R_rx^2 / w(L)^2),  w(L) = w0 sqrt(1 + (L/L_R)^2),
 * with Rayleigh range L_R = pi w0^2 / lambda.
 */
double free_space_transmittance(double link_distance_m, double tx_radius_m,
                                double rx_radius_m, double wavelength_m,
                                double fill_fraction = 0.8);

/**
 * Beer-Lambert atmosphere along a slant path: (eta_zen)^(sec zeta) above the
 * horizon, 0 at or below it. The zenith angle comes from the circular-orbit
 * relation cos(zeta) = h/L - (L^2 - h^2)/(2 R_E L). Throws when the (L, h)
 * pair is geometrically inconsistent (|cos| > 1 + 1e-9).
 */
double atmospheric_transmittance(double link_distance_m, double altitude_m,
                                 double eta_atm_zenith);

/** Slant-path atmosphere from an already known zenith angle. */
double atmospheric_transmittance_at(double zenith_angle_rad, double eta_atm_zenith);

/**
 * Total single-photon channel efficiency for one direction:
 * eta = eta_fs * eta_atm * kappa_sat * kappa_gs, with transmit/receive
 * apertures chosen by the direction. Zero with below_horizon set when the
 * satellite is not visible.
 */
ChannelEfficiency channel_efficiency(LinkDirection direction, const GeometryState& geom,
                                     const HardwareParams& hw);

}  // namespace qcs

#endif  // QCS_LINK_BUDGET_HPP
