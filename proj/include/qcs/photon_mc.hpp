#ifndef QCS_PHOTON_MC_HPP
#define QCS_PHOTON_MC_HPP

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "qcs/link_budget.hpp"
#include "qcs/rng.hpp"
#include "qcs/timestamp.hpp"

namespace qcs {

/** Pair source, background and detector noise rates for one scenario. */
struct SourceParams {
    double pair_rate_hz = 1e7;
    double bkg_rate_gs_hz = 0.0;
    double bkg_rate_sat_hz = 0.0;
    double dark_rate_hz = 0.0;
    double jitter_sigma_s = 0.0;
    uint64_t seed = 1;
};

/**
 * Constant clock offset: the satellite clock reads t + offset_s when the
 * ground clock reads t.
 */
struct ClockModel {
    double offset_s = 0.0;
};

/** One acquisition window; window_id keys the deterministic RNG split. */
struct AcquisitionWindow {
    double start_s = 0.0;
    double duration_s = 0.0;
    uint64_t window_id = 0;
};

/** Everything needed to simulate one satellite/ground two-way link. */
struct TwoWayLinkScenario {
    OrbitConfig orbit;
    GroundStationConfig station;
    HardwareParams hardware;
    SourceParams source;
    ClockModel clock;
    double t_bin_s = 0.5e-9;
};

/** Four detection sets of one window: one per (direction, party). */
struct TwoWayLinkData {
    TimestampSet a_up;   // uplink source, local stamps at the ground
    TimestampSet b_up;   // uplink remote stamps at the satellite
    TimestampSet b_dwn;  // downlink source, local stamps at the satellite
    TimestampSet a_dwn;  // downlink remote stamps at the ground
    bool any_visible = false;
};

/**
 * Photon-pair emission times: a Poisson process of the source rate over
 * [0, t_acq), sampled by exponential inter-arrivals. The sparse-regime
 * precondition R * t_bin < 0.1 is enforced (each photon needs a unique
 * timestamp at the working resolution).
 */
std::vector<double> generate_pair_stream(const SourceParams& src, double t_acq_s,
                                         double t_bin_s, Rng& rng);

/** Per-tick Bernoulli reference sampler kept to validate the fast path. */
std::vector<double> generate_pair_stream_per_tick(double rate_hz, double t_acq_s,
                                                  double t_bin_s, Rng& rng);

/**
 * One pair through the lossy channel: with probability eff.eta_total both
 * photons are stamped (local at the emitter, remote delayed by the light
 * travel time of the geometry at emission and shifted by the clock offset),
 * otherwise nothing. Jitter is Gaussian per detection, then quantized.
 */
std::optional<std::pair<uint64_t, uint64_t>> propagate_pair(
    double emission_t_s, LinkDirection direction,
    const std::function<double(double)>& link_distance_m, const ChannelEfficiency& eff,
    const ClockModel& clock, double jitter_sigma_s, double t_bin_s, Rng& rng);

/** Poisson background/dark stream over [0, t_acq), jittered and quantized. */
TimestampSet generate_background(double rate_hz, double t_acq_s, double jitter_sigma_s,
                                 double t_bin_s, Rng& rng);

/**
 * Full two-way Monte Carlo of one acquisition window.
 *
 * Each direction has its own pair source. Local detectors stamp every
 * emission at the full source rate; the remote stamp of a pair survives with
 * the direction's channel efficiency evaluated at the emission epoch. Each
 * of the four sets is merged with that platform's background and dark
 * streams. All streams split deterministically off (seed, window_id).
 */
TwoWayLinkData simulate_two_way_link(const TwoWayLinkScenario& scenario,
                                     const AcquisitionWindow& window);

/**
 * Idealized link with constant efficiencies and a linear range drift, for
 * studies pinned to a loss/range-rate pair rather than an orbit.
 */
struct LinearLinkModel {
    double distance0_m = 1000e3;
    double range_rate_mps = 0.0;
    double eta_up = 1.0;
    double eta_dwn = 1.0;
};

TwoWayLinkData simulate_two_way_link(const LinearLinkModel& link,
                                     const SourceParams& source, const ClockModel& clock,
                                     double t_bin_s, const AcquisitionWindow& window);

}  // namespace qcs

#endif  // QCS_PHOTON_MC_HPP
