#ifndef QCS_SHADOW_HPP
#define QCS_SHADOW_HPP

#include <cstdint>
#include <vector>

#include "qcs/snr_model.hpp"

namespace qcs {

/** Inputs for one precision-shadow evaluation. */
struct ShadowParams {
    HardwareParams hardware;
    SourceParams source;       // pair/background rates and jitter
    ProtocolParams protocol;
    double pass_cap_s = 690.0;          // visibility-pass clamp for K
    double target_precision_log10 = 9.0;  // cells meeting -log10(t_bin) >= target
    bool co_rotate_virtual_stations = true;
    double resolution_deg = 0.25;
};

struct ShadowCell {
    float precision_log10 = 0.0f;  // NaN when no sync is possible
    uint8_t binding = 0;           // BindingConstraint
    bool visible = false;
    bool meets_target = false;
};

/**
 * Lat/lon grid of achievable precision around the sub-satellite point at one
 * epoch. Rows run south to north, columns west to east.
 */
struct ShadowGrid {
    double lat0_deg = 0.0, lon0_deg = 0.0, res_deg = 0.25;
    std::size_t n_lat = 0, n_lon = 0;
    std::vector<ShadowCell> cells;  // row-major
    double epoch_s = 0.0;
    double sub_lat_deg = 0.0, sub_lon_deg = 0.0;
    Vec3 track_dir;  // unit ground-track direction at the sub-satellite point

    const ShadowCell& at(std::size_t i_lat, std::size_t i_lon) const {
        return cells[i_lat * n_lon + i_lon];
    }
    std::size_t mask_area_cells() const;
};

/**
 * Achievable precision for a virtual ground station at (lat, lon) against
 * the given satellite state, using the uplink budget (the weaker link).
 * Not-visible points return +inf with the horizon tag.
 */
PrecisionResult precision_at_point(const BodyState& sat_state, double lat_rad,
                                   double lon_rad, const ShadowParams& params);

/** Evaluate the shadow over the visibility bounding box. */
ShadowGrid compute_shadow(const BodyState& sat_state, const ShadowParams& params,
                          int threads = 1);

/**
 * Angular extents of the target mask through the sub-satellite point, along
 * the ground track and perpendicular to it, in degrees.
 */
void shadow_extents(const ShadowGrid& grid, double& along_deg, double& cross_deg);

}  // namespace qcs

#endif  // QCS_SHADOW_HPP
