#include "qcs/snr_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "qcs/geometry.hpp"

namespace qcs {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        std::nth_element(v.begin(), v.begin() + mid - 1, v.end());
        m = 0.5 * (m + v[mid - 1]);
    }
    return m;
}
}  // namespace

double optimal_acquisition_time(double k_factor, double t_bin_s, double pass_cap_s) {
    if (std::isinf(k_factor)) return pass_cap_s;
    return std::min(k_factor * t_bin_s, pass_cap_s);
}

double analytic_snr(double t_acq_s, double pair_rate_hz, double eta, double bkg_rate_hz,
                    double t_bin_s, double k_factor) {
    if (eta <= 0.0 || t_acq_s <= 0.0) return 0.0;
    const double b = 1.0 + bkg_rate_hz / (pair_rate_hz * eta);
    const double below = std::sqrt(eta / (t_bin_s * b)) * std::sqrt(t_acq_s);
    if (std::isinf(k_factor)) return below;
    const double t_opt = k_factor * t_bin_s;
    const double above =
        k_factor * std::sqrt(eta * t_bin_s / std::sqrt(b)) / std::sqrt(t_acq_s);
    if (t_acq_s < t_opt) return below;
    if (t_acq_s > t_opt) return above;
    return std::max(below, above);
}

double max_snr(double eta, double k_factor, double pair_rate_hz, double bkg_rate_hz) {
    if (eta <= 0.0) return 0.0;
    const double b = 1.0 + bkg_rate_hz / (pair_rate_hz * eta);
    return std::sqrt(eta * k_factor / b);
}

double noise_floor(double pair_rate_hz, double eta, double bkg_rate_hz,
                   double dark_rate_hz, double t_acq_s, double t_bin_s) {
    const double tt = t_acq_s * t_bin_s;
    return pair_rate_hz * pair_rate_hz * eta * tt + pair_rate_hz * bkg_rate_hz * tt +
           dark_rate_hz * (pair_rate_hz * eta + bkg_rate_hz + dark_rate_hz) * tt;
}

double precision_bound(double eta, double k_factor, double pair_rate_hz, double n_min,
                       double jitter_sigma_s) {
    if (std::isinf(k_factor)) return jitter_sigma_s;
    return n_min / (pair_rate_hz * eta * k_factor) + jitter_sigma_s;
}

double precision_bound_snr(double eta, double k_factor, double pair_rate_hz,
                           double bkg_rate_hz, double snr_threshold,
                           double jitter_sigma_s) {
    if (eta <= 0.0) return kInf;
    const double b = 1.0 + bkg_rate_hz / (pair_rate_hz * eta);
    const double denom =
        1.0 - snr_threshold * snr_threshold * b / (eta * k_factor);
    if (denom <= 0.0) return kInf;
    return jitter_sigma_s / denom;
}

double jittered_max_snr(double eta, double k_factor, double pair_rate_hz,
                        double bkg_rate_hz, double t_bin_s, double jitter_sigma_s) {
    if (eta <= 0.0 || t_bin_s <= jitter_sigma_s) return 0.0;
    const double b = 1.0 + bkg_rate_hz / (pair_rate_hz * eta);
    return std::sqrt(eta * k_factor / (t_bin_s * b)) *
           (1.0 - jitter_sigma_s / t_bin_s);
}

double suboptimal_precision(double snr_threshold, double n_min, double pair_rate_hz,
                            double eta, double bkg_rate_hz, double k_factor) {
    if (eta <= 0.0) return kInf;
    const double b = 1.0 + bkg_rate_hz / (pair_rate_hz * eta);
    return snr_threshold * snr_threshold * n_min * std::sqrt(b) /
           (pair_rate_hz * eta * eta * k_factor * k_factor);
}

double critical_angle(double altitude_m, double t_bin_s, double n_min,
                      double pair_rate_hz, const HardwareParams& hw) {
    const double goal = n_min / (pair_rate_hz * t_bin_s);
    const double re = kEarthRadiusM;
    const double r = re + altitude_m;

    const auto eta_k = [&](double theta) {
        const double L = std::sqrt(re * re + r * r - 2.0 * re * r * std::cos(theta));
        const double eta_fs = free_space_transmittance(
            L, hw.tx_radius_gs_m, hw.rx_radius_sat_m, hw.wavelength_m, hw.fill_fraction);
        const double eta_atm = atmospheric_transmittance(L, altitude_m, hw.eta_atm_zenith);
        const double eta = eta_fs * eta_atm * hw.det_eff_sat * hw.det_eff_gs;
        return eta * k_factor_inplane(theta, altitude_m);
    };

    double lo = deg2rad(0.05);
    double hi = std::acos(re / r);  // horizon
    if (eta_k(lo) < goal) return std::numeric_limits<double>::quiet_NaN();
    if (eta_k(hi) >= goal) return hi;
    const double tol = deg2rad(0.01);
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (eta_k(mid) >= goal ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

PrecisionResult achievable_precision(double eta, double k_factor, double pair_rate_hz,
                                     double bkg_rate_hz, double jitter_sigma_s,
                                     const ProtocolParams& proto, double pass_cap_s) {
    PrecisionResult res;
    res.t_acq_opt_s = optimal_acquisition_time(k_factor, proto.t_bin_s, pass_cap_s);
    if (eta <= 0.0) {
        res.t_bin_achievable_s = kInf;
        res.binding = BindingConstraint::NMin;
        return res;
    }

    // Minimum-count bound; infeasible when even a pass-long window cannot
    // collect N_min detections.
    double nmin_bound;
    if (proto.n_min / (pair_rate_hz * eta) > pass_cap_s)
        nmin_bound = kInf;
    else
        nmin_bound = precision_bound(eta, k_factor, pair_rate_hz, proto.n_min,
                                     jitter_sigma_s);

    // SNR bound with the drift-free K capped by the pass length.
    const double k_cap = pass_cap_s / proto.t_bin_s;
    const double k_eff = std::min(k_factor, k_cap);
    const double snr_bound = precision_bound_snr(eta, k_eff, pair_rate_hz, bkg_rate_hz,
                                                 proto.snr_threshold, jitter_sigma_s);
    res.snr_max = max_snr(eta, k_eff, pair_rate_hz, bkg_rate_hz);

    const double floor = proto.t_bin_s;
    res.t_bin_achievable_s = std::max({nmin_bound, snr_bound, floor});
    if (res.t_bin_achievable_s == floor && nmin_bound < floor && snr_bound < floor)
        res.binding = BindingConstraint::None;
    else if (nmin_bound >= snr_bound)
        res.binding = BindingConstraint::NMin;
    else
        res.binding = BindingConstraint::Snr;
    return res;
}

namespace {

// Slice of a sorted set restricted to [start_tick, end_tick).
TimestampSet slice(const TimestampSet& s, uint64_t start_tick, uint64_t end_tick) {
    TimestampSet out;
    out.t_bin_s = s.t_bin_s;
    out.party = s.party;
    out.window_start_tick = start_tick;
    out.window_end_tick = end_tick;
    const auto lo = std::lower_bound(s.ticks.begin(), s.ticks.end(), start_tick);
    const auto hi = std::lower_bound(lo, s.ticks.end(), end_tick);
    out.ticks.assign(lo, hi);
    return out;
}

struct RungEval {
    double med_snr = 0.0;
    double med_peak = 0.0;
    double med_delta_s = 0.0;
    double med_travel_s = 0.0;
    double med_snr_ab = 0.0, med_snr_ba = 0.0;
    bool valid = false;
};

RungEval evaluate_rung(const TwoWayLinkData& data, uint32_t bin_w, double t_acq_s,
                       const TauPrior& prior, int max_windows) {
    RungEval ev;
    const double t_bin = data.a_up.t_bin_s;
    if (data.a_up.empty() || data.b_dwn.empty()) return ev;

    const uint64_t first = std::min(data.a_up.ticks.front(), data.b_dwn.ticks.front());
    const uint64_t last = std::max(data.a_up.ticks.back(), data.b_dwn.ticks.back());
    const double span_s = static_cast<double>(last - first + 1) * t_bin;
    const int n_win = std::max(
        1, std::min(max_windows, static_cast<int>(std::floor(span_s / t_acq_s))));
    const uint64_t acq_ticks = static_cast<uint64_t>(t_acq_s / t_bin);
    if (acq_ticks == 0) return ev;

    const std::size_t n_bins =
        static_cast<std::size_t>(2 * prior.half_span_ticks / bin_w);
    if (n_bins < 50) return ev;

    std::vector<double> snrs, peaks, deltas, travels, snrs_ab, snrs_ba;
    for (int w = 0; w < n_win; ++w) {
        const uint64_t w0 = first + static_cast<uint64_t>(w) * acq_ticks;
        const TimestampSet a_slice = slice(data.a_up, w0, w0 + acq_ticks);
        const TimestampSet b_slice = slice(data.b_dwn, w0, w0 + acq_ticks);
        if (a_slice.empty() || b_slice.empty()) continue;

        CorrelationHistogram h_ab =
            cross_correlate(a_slice, data.b_up, bin_w,
                            prior.center_ab_tick - prior.half_span_ticks, n_bins);
        CorrelationHistogram h_ba =
            cross_correlate(b_slice, data.a_dwn, bin_w,
                            prior.center_ba_tick - prior.half_span_ticks, n_bins);
        const PeakReport ab = measure_snr(h_ab);
        const PeakReport ba = measure_snr(h_ba);
        snrs.push_back(std::min(ab.snr, ba.snr));
        peaks.push_back(static_cast<double>(std::min(ab.height, ba.height)));
        const OffsetEstimate est = offset_from_peaks(ab, ba, t_bin, bin_w);
        deltas.push_back(est.delta_s);
        travels.push_back(est.travel_time_s);
        snrs_ab.push_back(ab.snr);
        snrs_ba.push_back(ba.snr);
    }
    if (snrs.empty()) return ev;
    ev.med_snr = median(snrs);
    ev.med_peak = median(peaks);
    ev.med_delta_s = median(deltas);
    ev.med_travel_s = median(travels);
    ev.med_snr_ab = median(snrs_ab);
    ev.med_snr_ba = median(snrs_ba);
    ev.valid = true;
    return ev;
}

}  // namespace

OperationalSearchOutcome operational_search(const TwoWayLinkData& data,
                                            double snr_threshold, double n_min,
                                            const TauPrior& prior, int max_windows) {
    OperationalSearchOutcome out;
    const double t_bin = data.a_up.t_bin_s;
    if (data.a_up.empty() || data.b_dwn.empty()) return out;

    const uint64_t first = std::min(data.a_up.ticks.front(), data.b_dwn.ticks.front());
    const uint64_t last = std::max(data.a_up.ticks.back(), data.b_dwn.ticks.back());
    const double full_span_s = static_cast<double>(last - first + 1) * t_bin;
    const double acq_floor_s = 2048.0 * t_bin;

    const auto try_rung = [&](uint32_t w, double acq) {
        const RungEval ev = evaluate_rung(data, w, acq, prior, max_windows);
        if (!ev.valid) return false;
        if (ev.med_snr < snr_threshold || ev.med_peak < n_min) return false;
        out.success = true;
        out.t_bin_s = static_cast<double>(w) * t_bin;
        out.t_acq_s = acq;
        out.median_snr = ev.med_snr;
        out.median_peak = ev.med_peak;
        out.estimate.delta_s = ev.med_delta_s;
        out.estimate.travel_time_s = ev.med_travel_s;
        out.estimate.precision_s = out.t_bin_s;
        out.estimate.snr_ab = ev.med_snr_ab;
        out.estimate.snr_ba = ev.med_snr_ba;
        return true;
    };

    uint32_t bin_w = 1;
    double acq = full_span_s;
    if (try_rung(bin_w, acq)) return out;
    for (;;) {
        bool progressed = false;
        if (acq * 0.5 >= acq_floor_s) {
            acq *= 0.5;
            progressed = true;
            if (try_rung(bin_w, acq)) return out;
        }
        const uint32_t w2 = bin_w * 2;
        if (2 * prior.half_span_ticks / w2 >= 50 && w2 <= (1u << 20)) {
            bin_w = w2;
            progressed = true;
            if (try_rung(bin_w, acq)) return out;
        }
        if (!progressed) break;
    }
    return out;  // protocol failure at all rungs
}

}  // namespace qcs
