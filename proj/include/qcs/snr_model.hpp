#ifndef QCS_SNR_MODEL_HPP
#define QCS_SNR_MODEL_HPP

#include <cstdint>

#include "qcs/correlation.hpp"
#include "qcs/photon_mc.hpp"

namespace qcs {

/** Protocol-level thresholds shared by the analytic and measured paths. */
struct ProtocolParams {
    double t_bin_s = 0.5e-9;          // working tick / reporting floor
    double n_min = 10.0;              // minimum mean correlated detections
    double snr_threshold = 5.0;
    double holdover_s = 0.0;          // satellite clock holdover
    double sat_clock_precision = 9.0; // -log10 seconds
};

enum class BindingConstraint { None, NMin, Snr, Horizon };

/** Achievable bin size at one geometry and which bound was binding. */
struct PrecisionResult {
    double t_bin_achievable_s = 0.0;  // +inf when the protocol cannot run
    BindingConstraint binding = BindingConstraint::None;
    double snr_max = 0.0;
    double t_acq_opt_s = 0.0;
};

/** Optimal acquisition time K*t_bin, clamped to the pass length. */
double optimal_acquisition_time(double k_factor, double t_bin_s, double pass_cap_s);

/**
 * Piecewise closed-form SNR of the correlation peak versus acquisition time:
 * grows as sqrt(t_acq) until K*t_bin, then falls as 1/sqrt(t_acq) with the
 * background factor under an extra square root (kept exactly as the model
 * states it; the two branches meet only for zero background).
 */
double analytic_snr(double t_acq_s, double pair_rate_hz, double eta, double bkg_rate_hz,
                    double t_bin_s, double k_factor);

/** Peak SNR over acquisition time: sqrt(eta*K / (1 + R_bkg/(R*eta))). */
double max_snr(double eta, double k_factor, double pair_rate_hz, double bkg_rate_hz);

/**
 * Expected accidental-coincidence level per bin: source self-correlations,
 * source x background, and the dark-count cross terms.
 */
double noise_floor(double pair_rate_hz, double eta, double bkg_rate_hz,
                   double dark_rate_hz, double t_acq_s, double t_bin_s);

/**
 * Finest bin size satisfying the minimum-count condition,
 * t_bin >= N_min/(R*eta*K) + sigma_j. With K infinite only the jitter floor
 * remains.
 */
double precision_bound(double eta, double k_factor, double pair_rate_hz, double n_min,
                       double jitter_sigma_s);

/**
 * Finest bin size satisfying the SNR threshold under detector jitter:
 * t_bin >= sigma_j / (1 - (th^2/(eta*K))(1 + R_bkg/(R*eta))). Returns +inf
 * when the threshold is unreachable at any bin size.
 */
double precision_bound_snr(double eta, double k_factor, double pair_rate_hz,
                           double bkg_rate_hz, double snr_threshold,
                           double jitter_sigma_s);

/** Peak SNR at finite bin size with jitter; zero when sigma_j >= t_bin. */
double jittered_max_snr(double eta, double k_factor, double pair_rate_hz,
                        double bkg_rate_hz, double t_bin_s, double jitter_sigma_s);

/**
 * Bin size reachable when working at the threshold SNR instead of the peak
 * SNR, requiring N_min detections in total over the window:
 *   t_bin = th^2 * N_min * sqrt(1 + R_bkg/(R*eta)) / (R * eta^2 * K^2).
 */
double suboptimal_precision(double snr_threshold, double n_min, double pair_rate_hz,
                            double eta, double bkg_rate_hz, double k_factor);

/**
 * Largest boresight angle at which eta*K still supports the target bin size
 * for the given count threshold (uplink budget, in-plane K). Bisection to
 * 0.01 degrees; returns NaN when unsatisfiable even near overhead.
 */
double critical_angle(double altitude_m, double t_bin_s, double n_min,
                      double pair_rate_hz, const HardwareParams& hw);

/**
 * Combined achievable precision at one geometry: the weaker of the
 * minimum-count and SNR bounds, floored at the working tick, with the
 * drift-free (K = inf) case capped by the pass length.
 */
PrecisionResult achievable_precision(double eta, double k_factor, double pair_rate_hz,
                                     double bkg_rate_hz, double jitter_sigma_s,
                                     const ProtocolParams& proto, double pass_cap_s);

/** Prior location of the two directional peaks for the histogram windows. */
struct TauPrior {
    int64_t center_ab_tick = 0;
    int64_t center_ba_tick = 0;
    int64_t half_span_ticks = 4000;
};

struct OperationalSearchOutcome {
    bool success = false;
    double t_bin_s = 0.0;
    double t_acq_s = 0.0;
    double median_snr = 0.0;
    double median_peak = 0.0;
    OffsetEstimate estimate;
};

/**
 * Data-driven search for the finest workable (t_bin, t_acq): walk a binary
 * ladder from the tick floor and the full data span, tightening t_acq before
 * t_bin, until the measured SNR clears the threshold and the peak holds
 * N_min counts. Each rung is judged by the median over up to max_windows
 * disjoint acquisition windows. Returns success=false when no rung works.
 */
OperationalSearchOutcome operational_search(const TwoWayLinkData& data,
                                            double snr_threshold, double n_min,
                                            const TauPrior& prior,
                                            int max_windows = 15);

}  // namespace qcs

#endif  // QCS_SNR_MODEL_HPP
