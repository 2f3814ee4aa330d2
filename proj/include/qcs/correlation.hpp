#ifndef QCS_CORRELATION_HPP
#define QCS_CORRELATION_HPP

#include <cstdint>
#include <vector>

#include "qcs/timestamp.hpp"

namespace qcs {

/**
 * Binned two-way cross-correlation C(tau) between two timestamp sets.
 * Bin k counts pairs with tau_start + k*w <= t_B - t_A < tau_start + (k+1)*w,
 * everything in integer ticks. Noise statistics are filled by measure_snr.
 */
struct CorrelationHistogram {
    int64_t tau_start_tick = 0;
    uint32_t bin_width_ticks = 1;
    std::vector<uint64_t> counts;
    double noise_mean = 0.0;
    double noise_std = 0.0;
    double t_bin_s = 0.5e-9;
    double source_window_s = 0.0;  // acquisition time behind the sets

    int64_t bin_tau_tick(std::size_t k) const {
        return tau_start_tick + static_cast<int64_t>(k) * bin_width_ticks;
    }
    double bin_tau_s(std::size_t k) const {
        return static_cast<double>(bin_tau_tick(k)) * t_bin_s;
    }
};

/** Peak location, height and signal-to-noise of one histogram. */
struct PeakReport {
    int64_t tau_max_ticks = 0;
    uint64_t height = 0;
    double snr = 0.0;
    int n_peaks_above_threshold = 0;
    bool is_unique = false;
};

/** Two-way offset estimate from a pair of directional peaks. */
struct OffsetEstimate {
    double delta_s = 0.0;        // clock offset
    double travel_time_s = 0.0;  // reciprocal one-way time of travel
    double precision_s = 0.0;    // bin width used
    double snr_ab = 0.0;
    double snr_ba = 0.0;
};

/** Thrown by estimate_offset when a peak is not unique at the threshold. */
struct AmbiguousPeakError {
    int n_peaks_ab = 0;
    int n_peaks_ba = 0;
};

/**
 * Sparse two-pointer correlation sweep, exactly equal to the O(N_A*N_B)
 * brute-force count. Both sets must share t_bin; the tau window
 * [tau_start, tau_start + n_bins*width) is in ticks.
 */
CorrelationHistogram cross_correlate(const TimestampSet& a, const TimestampSet& b,
                                     uint32_t bin_width_ticks, int64_t tau_start_tick,
                                     std::size_t n_bins);

/**
 * Peak and noise statistics. Noise mean/std are computed over all bins
 * excluding the global maximum +- guard_bins; the report counts how many
 * bins exceed noise_mean + snr_threshold * noise_std. Requires >= 50 bins.
 * Ties for the maximum resolve to the smallest tau and mark the peak
 * non-unique.
 */
PeakReport measure_snr(CorrelationHistogram& hist, double snr_threshold = 5.0,
                       int guard_bins = 3);

/**
 * Two-way combination assuming reciprocity of the time of travel:
 * delta = (tau_ab - tau_ba)/2, travel = (tau_ab + tau_ba)/2.
 * Throws AmbiguousPeakError unless both peaks are unique.
 */
OffsetEstimate estimate_offset(CorrelationHistogram& hist_ab,
                               CorrelationHistogram& hist_ba,
                               double snr_threshold = 5.0, int guard_bins = 3);

/** Offset arithmetic from two already-measured peaks (no uniqueness gate). */
OffsetEstimate offset_from_peaks(const PeakReport& ab, const PeakReport& ba,
                                 double t_bin_s, uint32_t bin_width_ticks);

}  // namespace qcs

#endif  // QCS_CORRELATION_HPP
