#include "qcs/runner.hpp"

#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <thread>
#include <vector>

#include <json.hpp>

namespace qcs {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
    char buf[40];
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    uint64_t h = 1469598103934665603ULL;
    char c;
    while (is.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

const char* binding_name(uint8_t b) {
    switch (static_cast<BindingConstraint>(b)) {
        case BindingConstraint::None: return "none";
        case BindingConstraint::NMin: return "nmin";
        case BindingConstraint::Snr: return "snr";
        case BindingConstraint::Horizon: return "horizon";
    }
    return "?";
}

class OutputSet {
public:
    explicit OutputSet(const std::string& dir) : dir_(dir) { fs::create_directories(dir); }

    std::string path(const std::string& name) const { return (fs::path(dir_) / name).string(); }

    void note(const std::string& name) { names_.push_back(name); }

    // Manifest written last so a complete manifest implies complete outputs.
    void write_manifest(const Scenario& sc) {
        json m;
        m["tool"] = "qcs-sim";
        m["version"] = "0.1.0";
        m["config"] = json::parse(scenario_to_json(sc));
        json outs = json::array();
        for (const std::string& n : names_) {
            const std::string p = path(n);
            char hex[20];
            std::snprintf(hex, sizeof(hex), "%016" PRIx64, fnv1a64_file(p));
            outs.push_back({{"path", n},
                            {"bytes", static_cast<uint64_t>(fs::file_size(p))},
                            {"fnv1a64", hex}});
        }
        m["outputs"] = outs;
        std::ofstream os(path("manifest.json"), std::ios::binary);
        os << m.dump(2) << "\n";
    }

private:
    std::string dir_;
    std::vector<std::string> names_;
};

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const int k = std::min<int>(threads, static_cast<int>(n));
    for (int i = 0; i < k; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

void write_histogram_csv(const std::string& path, const CorrelationHistogram& hist) {
    std::ofstream os(path, std::ios::binary);
    os << "tau_s,count,snr_per_bin\n";
    const double std_ = hist.noise_std;
    for (std::size_t k = 0; k < hist.counts.size(); ++k) {
        const double snr =
            std_ > 0.0 ? (static_cast<double>(hist.counts[k]) - hist.noise_mean) / std_
                       : 0.0;
        os << fmt(hist.bin_tau_s(k)) << ',' << hist.counts[k] << ',' << fmt(snr) << '\n';
    }
}

struct WindowResult {
    CorrelationHistogram hist_ab, hist_ba;
    PeakReport rep_ab, rep_ba;
    OffsetEstimate estimate;
    bool visible = false;
};

void run_simulate_link(const Scenario& sc, OutputSet& out) {
    TwoWayLinkScenario link{sc.orbit, sc.stations.at(0), sc.hardware, sc.source, sc.clock,
                            sc.protocol.t_bin_s};

    std::vector<WindowResult> results(sc.n_windows);
    parallel_for(sc.n_windows, sc.threads, [&](std::size_t w) {
        AcquisitionWindow win{sc.start_s + static_cast<double>(w) * sc.t_acq_s, sc.t_acq_s,
                              w};
        const TwoWayLinkData data = simulate_two_way_link(link, win);
        WindowResult& res = results[w];
        res.visible = data.any_visible;
        if (!data.any_visible) return;

        // Histogram window centered on the mid-window travel time, wide
        // enough to cover the configured offset prior.
        const double t_mid = win.start_s + 0.5 * win.duration_s;
        const GeometryState g = link_state_at(sc.orbit, sc.stations[0], t_mid);
        const int64_t center =
            static_cast<int64_t>(std::llround(g.link_distance_m / kSpeedOfLight /
                                              link.t_bin_s));
        const int64_t half =
            static_cast<int64_t>(std::llround(sc.tau_half_span_us * 1e-6 / link.t_bin_s));
        const std::size_t n_bins =
            static_cast<std::size_t>(2 * half / sc.bin_width_ticks);

        res.hist_ab = cross_correlate(data.a_up, data.b_up, sc.bin_width_ticks,
                                      center - half, n_bins);
        res.hist_ba = cross_correlate(data.b_dwn, data.a_dwn, sc.bin_width_ticks,
                                      center - half, n_bins);
        res.hist_ab.source_window_s = sc.t_acq_s;
        res.hist_ba.source_window_s = sc.t_acq_s;
        res.rep_ab = measure_snr(res.hist_ab, sc.protocol.snr_threshold);
        res.rep_ba = measure_snr(res.hist_ba, sc.protocol.snr_threshold);
        res.estimate = offset_from_peaks(res.rep_ab, res.rep_ba, link.t_bin_s,
                                         sc.bin_width_ticks);

        if (sc.dump_timestamps) {
            const std::string up = "window" + std::to_string(w) + "_up.bin";
            const std::string dwn = "window" + std::to_string(w) + "_dwn.bin";
            write_timestamp_dump(out.path(up), data.a_up, data.b_up);
            write_timestamp_dump(out.path(dwn), data.b_dwn, data.a_dwn);
        }
    });

    std::ofstream os(out.path("offsets.csv"), std::ios::binary);
    os << "window,visible,tau_ab_s,tau_ba_s,delta_s,travel_time_s,snr_ab,snr_ba,"
          "peaks_above_ab,peaks_above_ba,unique\n";
    for (int w = 0; w < sc.n_windows; ++w) {
        const WindowResult& r = results[w];
        if (!r.visible) {
            os << w << ",0,,,,,,,,,\n";
            continue;
        }
        const std::string ha = "window" + std::to_string(w) + "_hist_up.csv";
        const std::string hb = "window" + std::to_string(w) + "_hist_dwn.csv";
        write_histogram_csv(out.path(ha), r.hist_ab);
        write_histogram_csv(out.path(hb), r.hist_ba);
        out.note(ha);
        out.note(hb);
        if (sc.dump_timestamps) {
            out.note("window" + std::to_string(w) + "_up.bin");
            out.note("window" + std::to_string(w) + "_dwn.bin");
        }
        os << w << ",1," << fmt(r.rep_ab.tau_max_ticks * sc.protocol.t_bin_s) << ','
           << fmt(r.rep_ba.tau_max_ticks * sc.protocol.t_bin_s) << ','
           << fmt(r.estimate.delta_s) << ',' << fmt(r.estimate.travel_time_s) << ','
           << fmt(r.rep_ab.snr) << ',' << fmt(r.rep_ba.snr) << ','
           << r.rep_ab.n_peaks_above_threshold << ',' << r.rep_ba.n_peaks_above_threshold
           << ',' << (r.rep_ab.is_unique && r.rep_ba.is_unique ? 1 : 0) << '\n';
    }
    os.close();
    out.note("offsets.csv");
}

void run_pass_trace(const Scenario& sc, OutputSet& out) {
    const GroundStationConfig& gs = sc.stations.at(0);
    const double pass_cap = 2.0 * std::acos(kEarthRadiusM / sc.orbit.radius_m()) /
                            sc.orbit.angular_rate_radps();
    std::ofstream os(out.path("pass_trace.csv"), std::ios::binary);
    os << "t_s,link_distance_m,zenith_deg,theta0_deg,eta_up,eta_dwn,k_factor,"
          "t_acq_opt_s,snr_max,t_bin_nmin_s,t_bin_snr_s,achievable_log10,binding\n";
    const std::size_t n = static_cast<std::size_t>(sc.duration_s / sc.step_s) + 1;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = i * sc.step_s;
        const GeometryState g = link_state_at(sc.orbit, gs, t);
        os << fmt(t) << ',' << fmt(g.link_distance_m) << ','
           << fmt(rad2deg(g.zenith_angle_rad)) << ',' << fmt(rad2deg(g.boresight_angle_rad))
           << ',';
        if (!g.visible) {
            os << "0,0,,,,,,,horizon\n";
            continue;
        }
        const ChannelEfficiency up = channel_efficiency(LinkDirection::Uplink, g, sc.hardware);
        const ChannelEfficiency dwn =
            channel_efficiency(LinkDirection::Downlink, g, sc.hardware);
        const PrecisionResult pr =
            achievable_precision(up.eta_total, g.k_factor, sc.source.pair_rate_hz,
                                 sc.source.bkg_rate_sat_hz, sc.source.jitter_sigma_s,
                                 sc.protocol, pass_cap);
        const double nmin_b = precision_bound(up.eta_total, g.k_factor,
                                              sc.source.pair_rate_hz, sc.protocol.n_min,
                                              sc.source.jitter_sigma_s);
        const double snr_b = precision_bound_snr(
            up.eta_total, std::min(g.k_factor, pass_cap / sc.protocol.t_bin_s),
            sc.source.pair_rate_hz, sc.source.bkg_rate_sat_hz, sc.protocol.snr_threshold,
            sc.source.jitter_sigma_s);
        const double plog = std::isfinite(pr.t_bin_achievable_s)
                                ? -std::log10(pr.t_bin_achievable_s)
                                : std::numeric_limits<double>::quiet_NaN();
        os << fmt(up.eta_total) << ',' << fmt(dwn.eta_total) << ',' << fmt(g.k_factor)
           << ',' << fmt(pr.t_acq_opt_s) << ',' << fmt(pr.snr_max) << ',' << fmt(nmin_b)
           << ',' << fmt(snr_b) << ',' << fmt(plog) << ','
           << binding_name(static_cast<uint8_t>(pr.binding)) << '\n';
    }
    os.close();
    out.note("pass_trace.csv");
}

void run_shadow(const Scenario& sc, OutputSet& out) {
    ShadowParams params;
    params.hardware = sc.hardware;
    params.source = sc.source;
    params.protocol = sc.protocol;
    params.pass_cap_s = 2.0 * std::acos(kEarthRadiusM / sc.orbit.radius_m()) /
                        sc.orbit.angular_rate_radps();
    params.target_precision_log10 = sc.target_precision_log10;
    params.co_rotate_virtual_stations = sc.co_rotate_virtual_stations;
    params.resolution_deg = sc.grid_resolution_deg;

    const BodyState sat = propagate(sc.orbit, sc.shadow_epoch_s);
    const ShadowGrid grid = compute_shadow(sat, params, sc.threads);

    std::ofstream os(out.path("shadow.csv"), std::ios::binary);
    os << "lat_deg,lon_deg,precision_log10,binding,visible,meets_target\n";
    for (std::size_t i = 0; i < grid.n_lat; ++i)
        for (std::size_t j = 0; j < grid.n_lon; ++j) {
            const ShadowCell& c = grid.at(i, j);
            os << fmt(grid.lat0_deg + i * grid.res_deg) << ','
               << fmt(grid.lon0_deg + j * grid.res_deg) << ','
               << fmt(c.precision_log10) << ',' << binding_name(c.binding) << ','
               << (c.visible ? 1 : 0) << ',' << (c.meets_target ? 1 : 0) << '\n';
        }
    os.close();
    out.note("shadow.csv");

    // Run-length encoding of the target mask, one line per row with runs.
    std::ofstream rle(out.path("shadow_mask.rle"), std::ios::binary);
    rle << "# lat0_deg lon0_deg res_deg n_lat n_lon\n"
        << fmt(grid.lat0_deg) << ' ' << fmt(grid.lon0_deg) << ' ' << fmt(grid.res_deg)
        << ' ' << grid.n_lat << ' ' << grid.n_lon << "\n"
        << "# row start_col run_len\n";
    for (std::size_t i = 0; i < grid.n_lat; ++i) {
        std::size_t j = 0;
        while (j < grid.n_lon) {
            if (!grid.at(i, j).meets_target) {
                ++j;
                continue;
            }
            std::size_t k = j;
            while (k < grid.n_lon && grid.at(i, k).meets_target) ++k;
            rle << i << ' ' << j << ' ' << (k - j) << '\n';
            j = k;
        }
    }
    rle.close();
    out.note("shadow_mask.rle");

    double along = 0.0, cross = 0.0;
    shadow_extents(grid, along, cross);
    std::ofstream sum(out.path("shadow_summary.csv"), std::ios::binary);
    sum << "sub_lat_deg,sub_lon_deg,along_deg,cross_deg,mask_cells,visible_cells\n";
    std::size_t vis = 0;
    for (const ShadowCell& c : grid.cells)
        if (c.visible) ++vis;
    sum << fmt(grid.sub_lat_deg) << ',' << fmt(grid.sub_lon_deg) << ',' << fmt(along)
        << ',' << fmt(cross) << ',' << grid.mask_area_cells() << ',' << vis << '\n';
    sum.close();
    out.note("shadow_summary.csv");
}

void run_network(const Scenario& sc, OutputSet& out) {
    const std::size_t n_st = sc.stations.size();
    std::vector<PrecisionSeries> links(n_st);
    parallel_for(n_st, sc.threads, [&](std::size_t i) {
        links[i] = link_precision_series(sc.stations[i], sc.orbit, sc.hardware, sc.source,
                                         sc.protocol, sc.duration_s, sc.step_s);
    });

    std::ofstream sum(out.path("network_summary.csv"), std::ios::binary);
    sum << "station1,station2,target_log10,connections,longest_gap_s,"
           "connected_fraction\n";
    const double target = sc.protocol.sat_clock_precision;  // reporting target
    for (std::size_t i = 0; i < n_st; ++i)
        for (std::size_t j = i + 1; j < n_st; ++j) {
            const PrecisionSeries combined = combine_with_holdover(
                links[i], links[j], sc.protocol.holdover_s, sc.protocol.sat_clock_precision);
            const std::string name = sc.stations[i].name + "-" + sc.stations[j].name;
            const std::string file = "pair_" + std::to_string(i) + "_" +
                                     std::to_string(j) + ".csv";
            std::ofstream os(out.path(file), std::ios::binary);
            os << "t_s,p1_log10,p2_log10,combined_log10\n";
            for (std::size_t k = 0; k < combined.size(); ++k)
                os << fmt(k * sc.step_s) << ',' << fmt(links[i].p[k]) << ','
                   << fmt(links[j].p[k]) << ',' << fmt(combined.p[k]) << '\n';
            os.close();
            out.note(file);
            const DailySummary ds = daily_summary(combined, target);
            sum << sc.stations[i].name << ',' << sc.stations[j].name << ',' << fmt(target)
                << ',' << ds.connections << ',' << fmt(ds.longest_gap_s) << ','
                << fmt(ds.connected_fraction) << '\n';
        }
    sum.close();
    out.note("network_summary.csv");
}

}  // namespace

void run_scenario(const Scenario& sc) {
    OutputSet out(sc.out_dir);
    switch (sc.kind) {
        case ScenarioKind::SimulateLink: run_simulate_link(sc, out); break;
        case ScenarioKind::PassTrace: run_pass_trace(sc, out); break;
        case ScenarioKind::Shadow: run_shadow(sc, out); break;
        case ScenarioKind::Network: run_network(sc, out); break;
    }
    out.write_manifest(sc);
}

void run_analyze(const AnalyzeOptions& opts) {
    OutputSet out(opts.out_dir);
    TimestampSet a_up, b_up, b_dwn, a_dwn;
    read_timestamp_dump(opts.uplink_dump, a_up, b_up);
    read_timestamp_dump(opts.downlink_dump, b_dwn, a_dwn);

    const double t_bin = a_up.t_bin_s;
    const auto build = [&](const TimestampSet& local, const TimestampSet& remote,
                           double center_us) {
        const int64_t center = static_cast<int64_t>(std::llround(center_us * 1e-6 / t_bin));
        const int64_t half =
            static_cast<int64_t>(std::llround(opts.tau_half_span_us * 1e-6 / t_bin));
        const std::size_t n_bins = static_cast<std::size_t>(2 * half / opts.bin_width_ticks);
        return cross_correlate(local, remote, opts.bin_width_ticks, center - half, n_bins);
    };
    CorrelationHistogram h_ab = build(a_up, b_up, opts.tau_center_ab_us);
    CorrelationHistogram h_ba = build(b_dwn, a_dwn, opts.tau_center_ba_us);
    const PeakReport ab = measure_snr(h_ab, opts.snr_threshold);
    const PeakReport ba = measure_snr(h_ba, opts.snr_threshold);
    write_histogram_csv(out.path("hist_up.csv"), h_ab);
    write_histogram_csv(out.path("hist_dwn.csv"), h_ba);
    out.note("hist_up.csv");
    out.note("hist_dwn.csv");

    const OffsetEstimate est = offset_from_peaks(ab, ba, t_bin, opts.bin_width_ticks);
    json rep;
    rep["tau_ab_s"] = ab.tau_max_ticks * t_bin;
    rep["tau_ba_s"] = ba.tau_max_ticks * t_bin;
    rep["delta_s"] = est.delta_s;
    rep["travel_time_s"] = est.travel_time_s;
    rep["precision_s"] = est.precision_s;
    rep["snr_ab"] = ab.snr;
    rep["snr_ba"] = ba.snr;
    rep["peaks_above_threshold_ab"] = ab.n_peaks_above_threshold;
    rep["peaks_above_threshold_ba"] = ba.n_peaks_above_threshold;
    rep["unique"] = ab.is_unique && ba.is_unique;
    std::ofstream os(out.path("offset_report.json"), std::ios::binary);
    os << rep.dump(2) << "\n";
    os.close();
    out.note("offset_report.json");

    json m;
    m["tool"] = "qcs-sim";
    m["version"] = "0.1.0";
    m["analyze"] = {{"uplink_dump", opts.uplink_dump},
                    {"downlink_dump", opts.downlink_dump},
                    {"tau_center_ab_us", opts.tau_center_ab_us},
                    {"tau_center_ba_us", opts.tau_center_ba_us},
                    {"tau_half_span_us", opts.tau_half_span_us},
                    {"bin_width_ticks", opts.bin_width_ticks}};
    std::ofstream ms(out.path("manifest.json"), std::ios::binary);
    ms << m.dump(2) << "\n";
}

}  // namespace qcs
