#ifndef QCS_NETWORK_HPP
#define QCS_NETWORK_HPP

#include <optional>
#include <string>
#include <vector>

#include "qcs/snr_model.hpp"

namespace qcs {

/**
 * Per-epoch sync precision of one station/satellite link over a mission,
 * as -log10(t_bin); NaN marks epochs with no usable link.
 */
struct PrecisionSeries {
    double start_s = 0.0;
    double step_s = 1.0;
    std::vector<double> p;

    std::size_t size() const { return p.size(); }
};

/** Connectivity figures of merit for one combined pair series. */
struct DailySummary {
    int connections = 0;           // maximal runs of epochs meeting the target
    double longest_gap_s = 0.0;    // longest interval without the target met
    double connected_fraction = 0.0;
};

/**
 * Analytic link precision for one ground station against one orbit,
 * evaluated every step_s over duration_s with the uplink budget.
 */
PrecisionSeries link_precision_series(const GroundStationConfig& gs,
                                      const OrbitConfig& orbit,
                                      const HardwareParams& hw, const SourceParams& src,
                                      const ProtocolParams& proto, double duration_s,
                                      double step_s);

/**
 * Pairwise precision through the satellite with clock holdover: at each
 * epoch t the partner may connect at any t' within +-holdover/2, capped by
 * the satellite clock precision; the simultaneous term carries no clock cap.
 * Window endpoints round outward on the epoch grid.
 */
PrecisionSeries combine_with_holdover(const PrecisionSeries& s1,
                                      const PrecisionSeries& s2, double holdover_s,
                                      double sat_clock_precision_log10);

/** Count connection events, the longest outage, and the connected fraction. */
DailySummary daily_summary(const PrecisionSeries& combined, double target_log10);

}  // namespace qcs

#endif  // QCS_NETWORK_HPP
