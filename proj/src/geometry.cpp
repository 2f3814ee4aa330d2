#include "qcs/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qcs {

double OrbitConfig::angular_rate_radps() const {
    const double r = radius_m();
    return std::sqrt(kEarthMu / (r * r * r));
}

BodyState propagate(const OrbitConfig& orbit, double t_s) {
    const double r = orbit.radius_m();
    const double sign = orbit.direction == OrbitDirection::Prograde ? 1.0 : -1.0;
    const double u = orbit.initial_phase_rad + sign * orbit.angular_rate_radps() * t_s;

    Vec3 pos{r * std::cos(u), r * std::sin(u), 0.0};
    pos = rotate_z(rotate_x(pos, orbit.inclination_rad), orbit.raan_rad);

    // Plane normal carries the angular velocity; v = omega x r exactly.
    Vec3 omega{0.0, 0.0, sign * orbit.angular_rate_radps()};
    omega = rotate_z(rotate_x(omega, orbit.inclination_rad), orbit.raan_rad);

    return {pos, omega.cross(pos), t_s};
}

BodyState propagate(const GroundStationConfig& gs, double t_s) {
    const double lon = gs.longitude_rad + kEarthSpinRadps * t_s;
    const double clat = std::cos(gs.latitude_rad);
    Vec3 pos{kEarthRadiusM * clat * std::cos(lon), kEarthRadiusM * clat * std::sin(lon),
             kEarthRadiusM * std::sin(gs.latitude_rad)};
    const Vec3 omega{0.0, 0.0, kEarthSpinRadps};
    return {pos, omega.cross(pos), t_s};
}

GeometryState link_geometry(const BodyState& sat, const BodyState& gs) {
    const Vec3 d = sat.position_m - gs.position_m;
    const double L = d.norm();
    if (L <= 0.0) throw std::invalid_argument("link_geometry: coincident bodies");

    const Vec3 u = d / L;
    const Vec3 zenith = gs.position_m.normalized();

    GeometryState g;
    g.link_distance_m = L;
    g.v_rel_rad_mps = (sat.velocity_mps - gs.velocity_mps).dot(u);
    g.zenith_angle_rad = std::acos(std::clamp(u.dot(zenith), -1.0, 1.0));
    g.boresight_angle_rad =
        std::acos(std::clamp(sat.position_m.normalized().dot(zenith), -1.0, 1.0));
    const double vr = std::fabs(g.v_rel_rad_mps);
    g.k_factor = vr > 0.0 ? kSpeedOfLight / vr : std::numeric_limits<double>::infinity();
    g.visible = g.zenith_angle_rad < kPi / 2.0;
    return g;
}

double k_factor_inplane(double theta0_rad, double altitude_m) {
    if (std::sin(theta0_rad) <= 0.0) return std::numeric_limits<double>::infinity();
    const double re = kEarthRadiusM;
    const double r = re + altitude_m;
    OrbitConfig o;
    o.altitude_m = altitude_m;
    const double omega = o.angular_rate_radps();
    const double L =
        std::sqrt(re * re + r * r - 2.0 * re * r * std::cos(theta0_rad));
    return kSpeedOfLight * L / (re * r * omega * std::sin(theta0_rad));
}

GeometryState link_state_at(const OrbitConfig& orbit, const GroundStationConfig& gs,
                            double t_s) {
    return link_geometry(propagate(orbit, t_s), propagate(gs, t_s));
}

void subsatellite_point(const BodyState& sat, double& lat_rad, double& lon_rad) {
    const Vec3& p = sat.position_m;
    lat_rad = std::asin(p.z / p.norm());
    lon_rad = std::atan2(p.y, p.x);
}

}  // namespace qcs
