#ifndef QCS_CONSTANTS_HPP
#define QCS_CONSTANTS_HPP

namespace qcs {

// Spherical Earth, solar day. All SI.
inline constexpr double kEarthRadiusM = 6371.0e3;
inline constexpr double kEarthMu = 3.986004418e14;     // GM [m^3/s^2]
inline constexpr double kEarthSpinRadps = 6.2831853071795864769 / 86400.0;
inline constexpr double kSpeedOfLight = 299792458.0;   // [m/s]
inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double deg2rad(double d) { return d * kPi / 180.0; }
inline constexpr double rad2deg(double r) { return r * 180.0 / kPi; }

}  // namespace qcs

#endif  // QCS_CONSTANTS_HPP
