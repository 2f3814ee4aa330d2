#include "qcs/network.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qcs {

PrecisionSeries link_precision_series(const GroundStationConfig& gs,
                                      const OrbitConfig& orbit,
                                      const HardwareParams& hw, const SourceParams& src,
                                      const ProtocolParams& proto, double duration_s,
                                      double step_s) {
    if (step_s < 1.0) throw std::invalid_argument("link_precision_series: step < 1 s");
    const double pass_cap =
        2.0 * std::acos(kEarthRadiusM / orbit.radius_m()) / orbit.angular_rate_radps();

    PrecisionSeries series;
    series.step_s = step_s;
    const std::size_t n = static_cast<std::size_t>(std::floor(duration_s / step_s)) + 1;
    series.p.assign(n, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < n; ++i) {
        const double t = i * step_s;
        const GeometryState geom = link_state_at(orbit, gs, t);
        if (!geom.visible) continue;
        const ChannelEfficiency eff = channel_efficiency(LinkDirection::Uplink, geom, hw);
        const PrecisionResult pr =
            achievable_precision(eff.eta_total, geom.k_factor, src.pair_rate_hz,
                                 src.bkg_rate_sat_hz, src.jitter_sigma_s, proto, pass_cap);
        if (std::isfinite(pr.t_bin_achievable_s))
            series.p[i] = -std::log10(pr.t_bin_achievable_s);
    }
    return series;
}

PrecisionSeries combine_with_holdover(const PrecisionSeries& s1,
                                      const PrecisionSeries& s2, double holdover_s,
                                      double sat_clock_precision_log10) {
    if (s1.size() != s2.size() || s1.step_s != s2.step_s)
        throw std::invalid_argument("combine_with_holdover: mismatched epoch grids");

    PrecisionSeries out;
    out.start_s = s1.start_s;
    out.step_s = s1.step_s;
    const std::size_t n = s1.size();
    out.p.assign(n, std::numeric_limits<double>::quiet_NaN());
    // Outward rounding keeps every t' with |t'-t| <= holdover/2 in play.
    const long w = static_cast<long>(std::ceil(holdover_s / 2.0 / s1.step_s));
    const double cap = sat_clock_precision_log10;

    for (std::size_t i = 0; i < n; ++i) {
        const double p1 = s1.p[i];
        if (!std::isfinite(p1)) continue;
        double best = std::numeric_limits<double>::quiet_NaN();
        // Simultaneous link: no satellite-clock cap.
        if (std::isfinite(s2.p[i])) best = std::min(p1, s2.p[i]);
        for (long j = static_cast<long>(i) - w; j <= static_cast<long>(i) + w; ++j) {
            if (j < 0 || j >= static_cast<long>(n) || j == static_cast<long>(i)) continue;
            const double p2 = s2.p[j];
            if (!std::isfinite(p2)) continue;
            const double cand = std::min({p1, p2, cap});
            if (!std::isfinite(best) || cand > best) best = cand;
        }
        out.p[i] = best;
    }
    return out;
}

DailySummary daily_summary(const PrecisionSeries& combined, double target_log10) {
    DailySummary sum;
    const std::size_t n = combined.size();
    if (n == 0) return sum;

    std::size_t meeting = 0;
    bool in_run = false;
    std::size_t gap_len = 0, longest_gap = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const bool ok = std::isfinite(combined.p[i]) && combined.p[i] >= target_log10;
        if (ok) {
            ++meeting;
            if (!in_run) ++sum.connections;
            in_run = true;
            longest_gap = std::max(longest_gap, gap_len);
            gap_len = 0;
        } else {
            in_run = false;
            ++gap_len;
        }
    }
    longest_gap = std::max(longest_gap, gap_len);
    sum.longest_gap_s = static_cast<double>(longest_gap) * combined.step_s;
    sum.connected_fraction = static_cast<double>(meeting) / static_cast<double>(n);
    return sum;
}

}  // namespace qcs
