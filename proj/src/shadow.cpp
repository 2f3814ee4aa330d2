#include "qcs/shadow.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace qcs {

namespace {

BodyState virtual_station(double lat_rad, double lon_rad, double epoch_s,
                          bool co_rotate) {
    const double clat = std::cos(lat_rad);
    BodyState st;
    st.position_m = {kEarthRadiusM * clat * std::cos(lon_rad),
                     kEarthRadiusM * clat * std::sin(lon_rad),
                     kEarthRadiusM * std::sin(lat_rad)};
    if (co_rotate) {
        const Vec3 omega{0.0, 0.0, kEarthSpinRadps};
        st.velocity_mps = omega.cross(st.position_m);
    }
    st.epoch_s = epoch_s;
    return st;
}

double wrap_deg(double d) {
    while (d > 180.0) d -= 360.0;
    while (d < -180.0) d += 360.0;
    return d;
}

}  // namespace

std::size_t ShadowGrid::mask_area_cells() const {
    std::size_t n = 0;
    for (const ShadowCell& c : cells)
        if (c.meets_target) ++n;
    return n;
}

PrecisionResult precision_at_point(const BodyState& sat_state, double lat_rad,
                                   double lon_rad, const ShadowParams& params) {
    const BodyState gs = virtual_station(lat_rad, lon_rad, sat_state.epoch_s,
                                         params.co_rotate_virtual_stations);
    const GeometryState geom = link_geometry(sat_state, gs);
    if (!geom.visible) {
        PrecisionResult res;
        res.t_bin_achievable_s = std::numeric_limits<double>::infinity();
        res.binding = BindingConstraint::Horizon;
        return res;
    }
    const ChannelEfficiency eff =
        channel_efficiency(LinkDirection::Uplink, geom, params.hardware);
    return achievable_precision(eff.eta_total, geom.k_factor,
                                params.source.pair_rate_hz, params.source.bkg_rate_sat_hz,
                                params.source.jitter_sigma_s, params.protocol,
                                params.pass_cap_s);
}

ShadowGrid compute_shadow(const BodyState& sat_state, const ShadowParams& params,
                          int threads) {
    ShadowGrid grid;
    grid.res_deg = params.resolution_deg;
    grid.epoch_s = sat_state.epoch_s;

    double sub_lat, sub_lon;
    subsatellite_point(sat_state, sub_lat, sub_lon);
    grid.sub_lat_deg = rad2deg(sub_lat);
    grid.sub_lon_deg = rad2deg(sub_lon);

    // Ground-track direction: horizontal component of the satellite velocity.
    const Vec3 r_hat = sat_state.position_m.normalized();
    const Vec3 v = sat_state.velocity_mps;
    grid.track_dir = (v - r_hat * v.dot(r_hat)).normalized();

    // Bounding box: visibility cone half-angle plus one cell of margin.
    const double r = sat_state.position_m.norm();
    const double psi_deg = rad2deg(std::acos(kEarthRadiusM / r));
    const double res = params.resolution_deg;
    const double lat_lo = std::max(-90.0, grid.sub_lat_deg - psi_deg - res);
    const double lat_hi = std::min(90.0, grid.sub_lat_deg + psi_deg + res);
    double lon_half = 180.0;
    const double worst_lat =
        std::max(std::fabs(lat_lo), std::fabs(lat_hi));
    if (worst_lat < 80.0)
        lon_half = std::min(180.0, psi_deg / std::cos(deg2rad(worst_lat)) + res);

    grid.lat0_deg = lat_lo;
    grid.lon0_deg = grid.sub_lon_deg - lon_half;
    grid.n_lat = static_cast<std::size_t>(std::floor((lat_hi - lat_lo) / res)) + 1;
    grid.n_lon = static_cast<std::size_t>(std::floor(2.0 * lon_half / res)) + 1;
    grid.cells.assign(grid.n_lat * grid.n_lon, ShadowCell{});

    const double target = params.target_precision_log10;
    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
        for (;;) {
            const std::size_t row = next.fetch_add(1);
            if (row >= grid.n_lat) return;
            const double lat = grid.lat0_deg + row * res;
            for (std::size_t col = 0; col < grid.n_lon; ++col) {
                const double lon = wrap_deg(grid.lon0_deg + col * res);
                const PrecisionResult pr = precision_at_point(
                    sat_state, deg2rad(lat), deg2rad(lon), params);
                ShadowCell& cell = grid.cells[row * grid.n_lon + col];
                cell.binding = static_cast<uint8_t>(pr.binding);
                cell.visible = pr.binding != BindingConstraint::Horizon;
                if (cell.visible && std::isfinite(pr.t_bin_achievable_s))
                    cell.precision_log10 =
                        static_cast<float>(-std::log10(pr.t_bin_achievable_s));
                else
                    cell.precision_log10 = std::numeric_limits<float>::quiet_NaN();
                cell.meets_target =
                    target <= 0.0 ? cell.visible
                                  : cell.visible && cell.precision_log10 >= target;
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return grid;
}

void shadow_extents(const ShadowGrid& grid, double& along_deg, double& cross_deg) {
    along_deg = 0.0;
    cross_deg = 0.0;
    if (grid.mask_area_cells() == 0) return;

    const Vec3 r0 = virtual_station(deg2rad(grid.sub_lat_deg), deg2rad(grid.sub_lon_deg),
                                    grid.epoch_s, false)
                        .position_m.normalized();
    const Vec3 along_dir = (grid.track_dir - r0 * grid.track_dir.dot(r0)).normalized();
    const Vec3 cross_dir = r0.cross(along_dir).normalized();

    const auto mask_at = [&](const Vec3& p) {
        const double lat = rad2deg(std::asin(p.z));
        const double lon = rad2deg(std::atan2(p.y, p.x));
        double dlon = lon - grid.lon0_deg;
        while (dlon < -180.0) dlon += 360.0;
        while (dlon > 360.0) dlon -= 360.0;
        const long i = std::lround((lat - grid.lat0_deg) / grid.res_deg);
        const long j = std::lround(dlon / grid.res_deg);
        if (i < 0 || j < 0 || i >= static_cast<long>(grid.n_lat) ||
            j >= static_cast<long>(grid.n_lon))
            return false;
        return grid.at(i, j).meets_target;
    };

    // Great-circle march outward from the sub-satellite point.
    const auto extent = [&](const Vec3& dir) {
        const double step = grid.res_deg / 4.0;
        double total = 0.0;
        for (double sign : {1.0, -1.0}) {
            double s = 0.0;
            while (s < 95.0) {
                const double next = s + step;
                const double a = deg2rad(next);
                const Vec3 p = r0 * std::cos(a) + dir * (sign * std::sin(a));
                if (!mask_at(p)) break;
                s = next;
            }
            total += s + step / 2.0;
        }
        return total;
    };
    along_deg = extent(along_dir);
    cross_deg = extent(cross_dir);
}

}  // namespace qcs
