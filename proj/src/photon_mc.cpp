#include "qcs/photon_mc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qcs {

namespace {

// Stable stream ids for the per-window RNG split.
enum Stream : uint64_t {
    kPairUp = 0,
    kLossUp,
    kJitterUpLocal,
    kJitterUpRemote,
    kPairDwn,
    kLossDwn,
    kJitterDwnLocal,
    kJitterDwnRemote,
    kBkgAUp,
    kBkgBUp,
    kBkgBDwn,
    kBkgADwn,
    kDarkAUp,
    kDarkBUp,
    kDarkBDwn,
    kDarkADwn,
};

// Stamp = time + optional Gaussian jitter, quantized. Stamps that land
// before the scenario origin are dropped by the caller via the optional.
std::optional<uint64_t> stamp(double t_s, double sigma_s, double t_bin_s, Rng& rng) {
    double t = t_s;
    if (sigma_s > 0.0) t += sigma_s * rng.gaussian();
    if (t < 0.0) return std::nullopt;
    return quantize_tick(t, t_bin_s);
}

void append(TimestampSet& set, uint64_t tick, DetectionLabel label) {
    set.ticks.push_back(tick);
    set.labels.push_back(static_cast<uint8_t>(label));
}

void merge_fragment(TimestampSet& set, const TimestampSet& frag, double offset_s,
                    DetectionLabel label) {
    for (uint64_t tick : frag.ticks) {
        const double t = static_cast<double>(tick) * frag.t_bin_s + offset_s;
        if (t < 0.0) continue;
        append(set, quantize_tick(t, set.t_bin_s), label);
    }
}

}  // namespace

std::vector<double> generate_pair_stream(const SourceParams& src, double t_acq_s,
                                         double t_bin_s, Rng& rng) {
    if (src.pair_rate_hz * t_bin_s >= 0.1)
        throw std::invalid_argument(
            "generate_pair_stream: rate * t_bin >= 0.1, timestamps would collide");
    std::vector<double> times;
    if (src.pair_rate_hz <= 0.0) return times;
    times.reserve(static_cast<std::size_t>(src.pair_rate_hz * t_acq_s * 1.2) + 16);
    double t = rng.exponential(src.pair_rate_hz);
    while (t < t_acq_s) {
        times.push_back(t);
        t += rng.exponential(src.pair_rate_hz);
    }
    return times;
}

std::vector<double> generate_pair_stream_per_tick(double rate_hz, double t_acq_s,
                                                  double t_bin_s, Rng& rng) {
    std::vector<double> times;
    const double p = rate_hz * t_bin_s;
    const uint64_t n = static_cast<uint64_t>(std::floor(t_acq_s / t_bin_s));
    for (uint64_t k = 0; k < n; ++k)
        if (rng.bernoulli(p)) times.push_back(static_cast<double>(k) * t_bin_s);
    return times;
}

std::optional<std::pair<uint64_t, uint64_t>> propagate_pair(
    double emission_t_s, LinkDirection direction,
    const std::function<double(double)>& link_distance_m, const ChannelEfficiency& eff,
    const ClockModel& clock, double jitter_sigma_s, double t_bin_s, Rng& rng) {
    if (!rng.bernoulli(eff.eta_total)) return std::nullopt;

    const double travel = link_distance_m(emission_t_s) / kSpeedOfLight;
    // Satellite clock reads ground time + offset. Uplink stamps: local on the
    // ground clock, remote on the satellite clock; downlink the reverse.
    double local_t, remote_t;
    if (direction == LinkDirection::Uplink) {
        local_t = emission_t_s;
        remote_t = emission_t_s + travel + clock.offset_s;
    } else {
        local_t = emission_t_s + clock.offset_s;
        remote_t = emission_t_s + travel;
    }
    const auto local = stamp(local_t, jitter_sigma_s, t_bin_s, rng);
    const auto remote = stamp(remote_t, jitter_sigma_s, t_bin_s, rng);
    if (!local || !remote) return std::nullopt;
    return std::make_pair(*local, *remote);
}

TimestampSet generate_background(double rate_hz, double t_acq_s, double jitter_sigma_s,
                                 double t_bin_s, Rng& rng) {
    TimestampSet frag;
    frag.t_bin_s = t_bin_s;
    frag.window_end_tick = static_cast<uint64_t>(std::ceil(t_acq_s / t_bin_s));
    if (rate_hz <= 0.0) return frag;
    double t = rng.exponential(rate_hz);
    while (t < t_acq_s) {
        if (auto tick = stamp(t, jitter_sigma_s, t_bin_s, rng))
            append(frag, *tick, DetectionLabel::Background);
        t += rng.exponential(rate_hz);
    }
    sort_by_tick(frag);
    return frag;
}

namespace {

// Shared generation core: geometry enters only through the per-epoch link
// distance and directional efficiencies.
TwoWayLinkData simulate_core(const SourceParams& source, const ClockModel& clock,
                             double t_bin, const AcquisitionWindow& win,
                             const std::function<double(double)>& link_distance,
                             const std::function<double(double)>& eta_up,
                             const std::function<double(double)>& eta_dwn,
                             bool any_visible) {
    const double sigma = source.jitter_sigma_s;
    const uint64_t seed = source.seed;
    const auto sub = [&](uint64_t stream) {
        return Rng::substream(seed, win.window_id, stream);
    };

    TwoWayLinkData out;
    for (TimestampSet* s : {&out.a_up, &out.b_up, &out.b_dwn, &out.a_dwn})
        s->t_bin_s = t_bin;
    out.a_up.party = out.a_dwn.party = Party::Ground;
    out.b_up.party = out.b_dwn.party = Party::Satellite;

    // Travel-time range over the window bounds the remote stamp windows.
    double travel_lo = 1e300, travel_hi = 0.0;
    for (int i = 0; i <= 8; ++i) {
        const double t = win.start_s + win.duration_s * i / 8.0;
        const double travel = link_distance(t) / kSpeedOfLight;
        travel_lo = std::min(travel_lo, travel);
        travel_hi = std::max(travel_hi, travel);
    }
    out.any_visible = any_visible;
    if (!any_visible) return out;  // nothing to acquire, sets stay empty

    const double margin = 6.0 * sigma + 2.0 * t_bin;
    struct SetSpec {
        TimestampSet* set;
        double start_s, duration_s;  // stamp window in that party's clock
        double bkg_rate, dark_rate;
        Stream bkg_stream, dark_stream;
    };
    const double d = clock.offset_s;
    const SetSpec specs[] = {
        {&out.a_up, win.start_s, win.duration_s, source.bkg_rate_gs_hz,
         source.dark_rate_hz, kBkgAUp, kDarkAUp},
        {&out.b_up, win.start_s + travel_lo + d, win.duration_s + (travel_hi - travel_lo),
         source.bkg_rate_sat_hz, source.dark_rate_hz, kBkgBUp, kDarkBUp},
        {&out.b_dwn, win.start_s + d, win.duration_s, source.bkg_rate_sat_hz,
         source.dark_rate_hz, kBkgBDwn, kDarkBDwn},
        {&out.a_dwn, win.start_s + travel_lo, win.duration_s + (travel_hi - travel_lo),
         source.bkg_rate_gs_hz, source.dark_rate_hz, kBkgADwn, kDarkADwn},
    };

    // Pair streams. The local detector stamps every emission at the source
    // rate; only the remote leg is thinned by the channel efficiency, so the
    // accidental-correlation floor carries the full source rate.
    struct DirSpec {
        LinkDirection dir;
        TimestampSet* local;
        TimestampSet* remote;
        Stream pair_stream, loss_stream, jitter_local, jitter_remote;
    };
    const DirSpec dirs[] = {
        {LinkDirection::Uplink, &out.a_up, &out.b_up, kPairUp, kLossUp, kJitterUpLocal,
         kJitterUpRemote},
        {LinkDirection::Downlink, &out.b_dwn, &out.a_dwn, kPairDwn, kLossDwn,
         kJitterDwnLocal, kJitterDwnRemote},
    };

    for (const DirSpec& ds : dirs) {
        Rng pair_rng = sub(ds.pair_stream);
        Rng loss_rng = sub(ds.loss_stream);
        Rng jl = sub(ds.jitter_local);
        Rng jr = sub(ds.jitter_remote);
        const std::vector<double> emissions =
            generate_pair_stream(source, win.duration_s, t_bin, pair_rng);
        const auto& eta_fn = ds.dir == LinkDirection::Uplink ? eta_up : eta_dwn;
        for (double rel : emissions) {
            const double t = win.start_s + rel;
            const double local_t = ds.dir == LinkDirection::Uplink ? t : t + d;
            if (auto tick = stamp(local_t, sigma, t_bin, jl))
                append(*ds.local, *tick, DetectionLabel::Pair);

            if (!loss_rng.bernoulli(eta_fn(t))) continue;
            const double travel = link_distance(t) / kSpeedOfLight;
            const double remote_t =
                ds.dir == LinkDirection::Uplink ? t + travel + d : t + travel;
            if (auto tick = stamp(remote_t, sigma, t_bin, jr))
                append(*ds.remote, *tick, DetectionLabel::Pair);
        }
    }

    for (const SetSpec& ss : specs) {
        Rng bkg_rng = sub(ss.bkg_stream);
        const TimestampSet bkg = generate_background(ss.bkg_rate, ss.duration_s + margin,
                                                     sigma, t_bin, bkg_rng);
        merge_fragment(*ss.set, bkg, ss.start_s, DetectionLabel::Background);
        if (ss.dark_rate > 0.0) {
            Rng dark_rng = sub(ss.dark_stream);
            const TimestampSet dark = generate_background(
                ss.dark_rate, ss.duration_s + margin, 0.0, t_bin, dark_rng);
            merge_fragment(*ss.set, dark, ss.start_s, DetectionLabel::Dark);
        }
        const double w0 = std::max(0.0, ss.start_s);
        ss.set->window_start_tick = quantize_tick(w0, t_bin);
        ss.set->window_end_tick =
            quantize_tick(std::max(w0, ss.start_s + ss.duration_s + margin), t_bin);
        sort_by_tick(*ss.set);
    }
    return out;
}

}  // namespace

TwoWayLinkData simulate_two_way_link(const TwoWayLinkScenario& sc,
                                     const AcquisitionWindow& win) {
    bool any_visible = false;
    for (int i = 0; i <= 8; ++i) {
        const double t = win.start_s + win.duration_s * i / 8.0;
        if (link_state_at(sc.orbit, sc.station, t).visible) any_visible = true;
    }
    const auto link_distance = [&](double t) {
        return link_state_at(sc.orbit, sc.station, t).link_distance_m;
    };
    const auto eta_for = [&](LinkDirection dir) {
        return [&, dir](double t) {
            const GeometryState g = link_state_at(sc.orbit, sc.station, t);
            return channel_efficiency(dir, g, sc.hardware).eta_total;
        };
    };
    return simulate_core(sc.source, sc.clock, sc.t_bin_s, win, link_distance,
                         eta_for(LinkDirection::Uplink), eta_for(LinkDirection::Downlink),
                         any_visible);
}

TwoWayLinkData simulate_two_way_link(const LinearLinkModel& link,
                                     const SourceParams& source, const ClockModel& clock,
                                     double t_bin_s, const AcquisitionWindow& window) {
    const auto dist = [&](double t) {
        return link.distance0_m + link.range_rate_mps * t;
    };
    return simulate_core(source, clock, t_bin_s, window, dist,
                         [&](double) { return link.eta_up; },
                         [&](double) { return link.eta_dwn; }, true);
}

}  // namespace qcs
