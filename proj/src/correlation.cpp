#include "qcs/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qcs {

CorrelationHistogram cross_correlate(const TimestampSet& a, const TimestampSet& b,
                                     uint32_t bin_width_ticks, int64_t tau_start_tick,
                                     std::size_t n_bins) {
    if (a.t_bin_s != b.t_bin_s)
        throw std::invalid_argument("cross_correlate: mismatched t_bin");
    if (bin_width_ticks == 0)
        throw std::invalid_argument("cross_correlate: zero bin width");

    CorrelationHistogram h;
    h.tau_start_tick = tau_start_tick;
    h.bin_width_ticks = bin_width_ticks;
    h.t_bin_s = a.t_bin_s;
    h.counts.assign(n_bins, 0);
    const int64_t tau_end =
        tau_start_tick + static_cast<int64_t>(n_bins) * bin_width_ticks;

    // For each a_i the contributing b_j lie in [a_i + tau_start, a_i + tau_end);
    // both boundaries advance monotonically with i.
    std::size_t lo = 0, hi = 0;
    for (uint64_t ai : a.ticks) {
        const int64_t ia = static_cast<int64_t>(ai);
        while (lo < b.ticks.size() && static_cast<int64_t>(b.ticks[lo]) < ia + tau_start_tick)
            ++lo;
        if (hi < lo) hi = lo;
        while (hi < b.ticks.size() && static_cast<int64_t>(b.ticks[hi]) < ia + tau_end)
            ++hi;
        for (std::size_t j = lo; j < hi; ++j) {
            const int64_t tau = static_cast<int64_t>(b.ticks[j]) - ia;
            const std::size_t k =
                static_cast<std::size_t>((tau - tau_start_tick) / bin_width_ticks);
            ++h.counts[k];
        }
    }
    return h;
}

PeakReport measure_snr(CorrelationHistogram& hist, double snr_threshold,
                       int guard_bins) {
    const std::size_t n = hist.counts.size();
    if (n < 50)
        throw std::invalid_argument("measure_snr: need at least 50 bins");

    std::size_t arg = 0;
    uint64_t best = 0;
    bool tie = false;
    for (std::size_t k = 0; k < n; ++k) {
        if (hist.counts[k] > best) {
            best = hist.counts[k];
            arg = k;
            tie = false;
        } else if (hist.counts[k] == best && best > 0 && k != arg) {
            tie = true;
        }
    }

    // Noise statistics exclude the max bin and its guard neighborhood.
    const std::size_t g_lo = arg >= static_cast<std::size_t>(guard_bins)
                                 ? arg - guard_bins
                                 : 0;
    const std::size_t g_hi = std::min(n - 1, arg + static_cast<std::size_t>(guard_bins));
    double sum = 0.0, sum2 = 0.0;
    std::size_t m = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (k >= g_lo && k <= g_hi) continue;
        const double c = static_cast<double>(hist.counts[k]);
        sum += c;
        sum2 += c * c;
        ++m;
    }
    PeakReport rep;
    rep.tau_max_ticks = hist.bin_tau_tick(arg);
    rep.height = best;
    if (m >= 2) {
        hist.noise_mean = sum / m;
        const double var = std::max(0.0, (sum2 - sum * sum / m) / (m - 1));
        hist.noise_std = std::sqrt(var);
    } else {
        hist.noise_mean = 0.0;
        hist.noise_std = 0.0;
    }

    if (best == 0) {
        rep.snr = 0.0;
        rep.n_peaks_above_threshold = 0;
        rep.is_unique = false;
        return rep;
    }
    rep.snr = hist.noise_std > 0.0
                  ? (static_cast<double>(best) - hist.noise_mean) / hist.noise_std
                  : (static_cast<double>(best) > hist.noise_mean ? 1e300 : 0.0);

    const double gate = hist.noise_mean + snr_threshold * hist.noise_std;
    int above = 0;
    for (uint64_t c : hist.counts)
        if (static_cast<double>(c) > gate) ++above;
    rep.n_peaks_above_threshold = above;
    rep.is_unique = !tie && above == 1;
    return rep;
}

OffsetEstimate offset_from_peaks(const PeakReport& ab, const PeakReport& ba,
                                 double t_bin_s, uint32_t bin_width_ticks) {
    OffsetEstimate est;
    const double tau_ab = static_cast<double>(ab.tau_max_ticks) * t_bin_s;
    const double tau_ba = static_cast<double>(ba.tau_max_ticks) * t_bin_s;
    est.delta_s = 0.5 * (tau_ab - tau_ba);
    est.travel_time_s = 0.5 * (tau_ab + tau_ba);
    est.precision_s = static_cast<double>(bin_width_ticks) * t_bin_s;
    est.snr_ab = ab.snr;
    est.snr_ba = ba.snr;
    return est;
}

OffsetEstimate estimate_offset(CorrelationHistogram& hist_ab,
                               CorrelationHistogram& hist_ba, double snr_threshold,
                               int guard_bins) {
    const PeakReport ab = measure_snr(hist_ab, snr_threshold, guard_bins);
    const PeakReport ba = measure_snr(hist_ba, snr_threshold, guard_bins);
    if (!ab.is_unique || !ba.is_unique)
        throw AmbiguousPeakError{ab.n_peaks_above_threshold, ba.n_peaks_above_threshold};
    if (hist_ab.bin_width_ticks != hist_ba.bin_width_ticks ||
        hist_ab.t_bin_s != hist_ba.t_bin_s)
        throw std::invalid_argument("estimate_offset: mismatched histograms");
    return offset_from_peaks(ab, ba, hist_ab.t_bin_s, hist_ab.bin_width_ticks);
}

}  // namespace qcs
