#ifndef QCS_GEOMETRY_HPP
#define QCS_GEOMETRY_HPP

#include <string>

#include "qcs/constants.hpp"
#include "qcs/vec3.hpp"

namespace qcs {

enum class OrbitDirection { Prograde, Retrograde };

/**
 * Circular orbit around a spherical Earth.
 *
 * The orbital plane is the equatorial plane tilted by `inclination_rad`
 * about the x-axis and then rotated by `raan_rad` about the Earth's axis.
 * `initial_phase_rad` is the in-plane angle at t = 0.
 */
struct OrbitConfig {
    double altitude_m = 500e3;
    double inclination_rad = deg2rad(90.0);
    double raan_rad = 0.0;
    double initial_phase_rad = 0.0;
    OrbitDirection direction = OrbitDirection::Prograde;

    double radius_m() const { return kEarthRadiusM + altitude_m; }
    // Mean motion sqrt(GM/r^3).
    double angular_rate_radps() const;
    double period_s() const { return 2.0 * kPi / angular_rate_radps(); }
};

/** Ground station fixed to the rotating Earth at sea level. */
struct GroundStationConfig {
    double latitude_rad = 0.0;
    double longitude_rad = 0.0;
    std::string name;
};

/** Instantaneous position/velocity of a satellite or ground station. */
struct BodyState {
    Vec3 position_m;
    Vec3 velocity_mps;
    double epoch_s = 0.0;
};

/**
 * Relative geometry of one satellite/ground-station link.
 *
 * k_factor = c / |relative radial velocity|; +inf when the range rate
 * vanishes (overhead pass). `boresight_angle_rad` is the Earth-center angle
 * between the two position vectors.
 */
struct GeometryState {
    double link_distance_m = 0.0;
    double zenith_angle_rad = 0.0;
    double boresight_angle_rad = 0.0;
    double v_rel_rad_mps = 0.0;  // range rate, positive when receding
    double k_factor = 0.0;
    bool visible = false;
};

BodyState propagate(const OrbitConfig& orbit, double t_s);
BodyState propagate(const GroundStationConfig& gs, double t_s);

/** Link geometry from two states at a common epoch. Throws if coincident. */
GeometryState link_geometry(const BodyState& sat, const BodyState& gs);

/**
 * Closed-form K factor for the in-plane configuration: the ground-station
 * zenith lies in the orbital plane and only the satellite's angular rate
 * drives the range rate. Returns +inf as theta0 -> 0.
 */
double k_factor_inplane(double theta0_rad, double altitude_m);

/** Convenience: propagate both bodies and compute the link geometry. */
GeometryState link_state_at(const OrbitConfig& orbit, const GroundStationConfig& gs,
                            double t_s);

/** Geocentric latitude/longitude of the sub-satellite point [rad]. */
void subsatellite_point(const BodyState& sat, double& lat_rad, double& lon_rad);

}  // namespace qcs

#endif  // QCS_GEOMETRY_HPP
