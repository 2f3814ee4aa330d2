#include "qcs/scenario.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qcs {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) {
    throw ConfigError("config error at '" + path + "': " + why);
}

const json& require(const json& j, const std::string& path, const std::string& key) {
    if (!j.is_object()) fail(path, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) fail(path + "." + key, "missing required field");
    return *it;
}

double num(const json& j, const std::string& path, const std::string& key) {
    const json& v = require(j, path, key);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
}

double num_or(const json& j, const std::string& path, const std::string& key,
              double fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    return num(j, path, key);
}

std::string str(const json& j, const std::string& path, const std::string& key) {
    const json& v = require(j, path, key);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

OrbitConfig parse_orbit(const json& j, const std::string& path) {
    OrbitConfig o;
    o.altitude_m = num(j, path, "altitude_km") * 1e3;
    if (o.altitude_m <= 0.0) fail(path + ".altitude_km", "must be > 0");
    o.inclination_rad = deg2rad(num(j, path, "inclination_deg"));
    o.raan_rad = deg2rad(num_or(j, path, "raan_deg", 0.0));
    o.initial_phase_rad = deg2rad(num_or(j, path, "initial_phase_deg", 0.0));
    const std::string dir =
        j.contains("direction") ? str(j, path, "direction") : "prograde";
    if (dir == "prograde")
        o.direction = OrbitDirection::Prograde;
    else if (dir == "retrograde")
        o.direction = OrbitDirection::Retrograde;
    else
        fail(path + ".direction", "expected 'prograde' or 'retrograde'");
    return o;
}

GroundStationConfig parse_station(const json& j, const std::string& path) {
    GroundStationConfig g;
    g.latitude_rad = deg2rad(num(j, path, "latitude_deg"));
    g.longitude_rad = deg2rad(num(j, path, "longitude_deg"));
    if (std::fabs(g.latitude_rad) > kPi / 2.0 + 1e-12)
        fail(path + ".latitude_deg", "latitude out of [-90, 90]");
    g.name = j.contains("name") ? str(j, path, "name") : "";
    return g;
}

HardwareParams parse_hardware(const json& j, const std::string& path) {
    HardwareParams h;
    h.wavelength_m = num_or(j, path, "wavelength_nm", 810.0) * 1e-9;
    h.tx_radius_sat_m = num_or(j, path, "tx_radius_sat_m", 0.10);
    h.tx_radius_gs_m = num_or(j, path, "tx_radius_gs_m", 0.60);
    h.rx_radius_sat_m = num_or(j, path, "rx_radius_sat_m", h.tx_radius_sat_m);
    h.rx_radius_gs_m = num_or(j, path, "rx_radius_gs_m", h.tx_radius_gs_m);
    h.det_eff_sat = num_or(j, path, "det_eff_sat", 0.5);
    h.det_eff_gs = num_or(j, path, "det_eff_gs", 0.5);
    h.eta_atm_zenith = num_or(j, path, "eta_atm_zenith", 0.6);
    h.fill_fraction = num_or(j, path, "fill_fraction", 0.8);
    for (const auto& [k, v] :
         {std::pair<const char*, double>{"wavelength_nm", h.wavelength_m},
          {"tx_radius_sat_m", h.tx_radius_sat_m},
          {"tx_radius_gs_m", h.tx_radius_gs_m},
          {"fill_fraction", h.fill_fraction}})
        if (v <= 0.0) fail(path + "." + k, "must be > 0");
    for (const auto& [k, v] : {std::pair<const char*, double>{"det_eff_sat", h.det_eff_sat},
                               {"det_eff_gs", h.det_eff_gs}})
        if (v < 0.0 || v > 1.0) fail(path + "." + k, "must be in [0, 1]");
    if (h.eta_atm_zenith <= 0.0 || h.eta_atm_zenith > 1.0)
        fail(path + ".eta_atm_zenith", "must be in (0, 1]");
    return h;
}

SourceParams parse_source(const json& j, const std::string& path) {
    SourceParams s;
    s.pair_rate_hz = num(j, path, "pair_rate_hz");
    s.bkg_rate_gs_hz = num_or(j, path, "bkg_rate_gs_hz", 0.0);
    s.bkg_rate_sat_hz = num_or(j, path, "bkg_rate_sat_hz", 0.0);
    s.dark_rate_hz = num_or(j, path, "dark_rate_hz", 0.0);
    s.jitter_sigma_s = num_or(j, path, "jitter_sigma_ps", 0.0) * 1e-12;
    if (j.contains("seed")) s.seed = require(j, path, "seed").get<uint64_t>();
    for (const auto& [k, v] : {std::pair<const char*, double>{"pair_rate_hz", s.pair_rate_hz},
                               {"bkg_rate_gs_hz", s.bkg_rate_gs_hz},
                               {"bkg_rate_sat_hz", s.bkg_rate_sat_hz},
                               {"dark_rate_hz", s.dark_rate_hz},
                               {"jitter_sigma_ps", s.jitter_sigma_s}})
        if (v < 0.0) fail(path + "." + k, "must be >= 0");
    return s;
}

ProtocolParams parse_protocol(const json& j, const std::string& path) {
    ProtocolParams p;
    p.t_bin_s = num_or(j, path, "t_bin_ns", 0.5) * 1e-9;
    p.n_min = num_or(j, path, "n_min", 10.0);
    p.snr_threshold = num_or(j, path, "snr_threshold", 5.0);
    p.holdover_s = num_or(j, path, "holdover_s", 0.0);
    p.sat_clock_precision = num_or(j, path, "sat_clock_precision_log10", 9.0);
    if (p.t_bin_s <= 0.0) fail(path + ".t_bin_ns", "must be > 0");
    if (p.n_min < 1.0) fail(path + ".n_min", "must be >= 1");
    if (p.snr_threshold <= 0.0) fail(path + ".snr_threshold", "must be > 0");
    return p;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config error: invalid JSON: ") + e.what());
    }
    // A manifest embeds the resolved scenario under "config".
    if (j.is_object() && j.contains("config") && j.contains("outputs")) j = j["config"];

    Scenario sc;
    const std::string kind = str(j, "", "kind");
    if (kind == "simulate-link")
        sc.kind = ScenarioKind::SimulateLink;
    else if (kind == "pass-trace")
        sc.kind = ScenarioKind::PassTrace;
    else if (kind == "shadow")
        sc.kind = ScenarioKind::Shadow;
    else if (kind == "network")
        sc.kind = ScenarioKind::Network;
    else
        fail("kind", "expected simulate-link | pass-trace | shadow | network");

    sc.orbit = parse_orbit(require(j, "", "orbit"), "orbit");
    sc.hardware = parse_hardware(j.contains("hardware") ? j["hardware"] : json::object(),
                                 "hardware");
    sc.source = parse_source(require(j, "", "source"), "source");
    sc.protocol = parse_protocol(j.contains("protocol") ? j["protocol"] : json::object(),
                                 "protocol");
    sc.clock.offset_s = num_or(j, "", "clock_offset_us", 0.0) * 1e-6;

    if (j.contains("ground_station"))
        sc.stations.push_back(parse_station(j["ground_station"], "ground_station"));
    if (j.contains("ground_stations")) {
        const json& arr = j["ground_stations"];
        if (!arr.is_array()) fail("ground_stations", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i)
            sc.stations.push_back(
                parse_station(arr[i], "ground_stations[" + std::to_string(i) + "]"));
    }

    switch (sc.kind) {
        case ScenarioKind::SimulateLink: {
            if (sc.stations.size() != 1)
                fail("ground_station", "simulate-link needs exactly one station");
            sc.t_acq_s = num(j, "", "t_acq_s");
            sc.start_s = num_or(j, "", "start_s", 0.0);
            sc.n_windows = static_cast<int>(num_or(j, "", "n_windows", 1.0));
            sc.tau_half_span_us = num_or(j, "", "tau_half_span_us", 15.0);
            sc.bin_width_ticks =
                static_cast<uint32_t>(num_or(j, "", "bin_width_ticks", 1.0));
            sc.dump_timestamps =
                j.contains("dump_timestamps") && j["dump_timestamps"].get<bool>();
            if (sc.t_acq_s <= 0.0) fail("t_acq_s", "must be > 0");
            if (sc.n_windows < 1) fail("n_windows", "must be >= 1");
            break;
        }
        case ScenarioKind::PassTrace:
            if (sc.stations.size() != 1)
                fail("ground_station", "pass-trace needs exactly one station");
            sc.duration_s = num(j, "", "duration_s");
            sc.step_s = num_or(j, "", "step_s", 1.0);
            break;
        case ScenarioKind::Shadow:
            sc.grid_resolution_deg = num_or(j, "", "grid_resolution_deg", 0.25);
            sc.target_precision_log10 = num_or(j, "", "target_precision_log10", 9.0);
            sc.shadow_epoch_s = num_or(j, "", "epoch_s", 0.0);
            if (j.contains("co_rotate_virtual_stations"))
                sc.co_rotate_virtual_stations =
                    j["co_rotate_virtual_stations"].get<bool>();
            if (sc.grid_resolution_deg < 0.1)
                fail("grid_resolution_deg", "must be >= 0.1");
            break;
        case ScenarioKind::Network:
            if (sc.stations.size() < 2)
                fail("ground_stations", "network needs at least two stations");
            sc.duration_s = num(j, "", "duration_s");
            sc.step_s = num_or(j, "", "step_s", 1.0);
            break;
    }

    sc.out_dir = j.contains("out_dir") ? str(j, "", "out_dir") : "out";
    sc.threads = static_cast<int>(num_or(j, "", "threads", 1.0));
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config error: cannot open " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_scenario(ss.str());
}

std::string scenario_to_json(const Scenario& sc) {
    json j;
    switch (sc.kind) {
        case ScenarioKind::SimulateLink: j["kind"] = "simulate-link"; break;
        case ScenarioKind::PassTrace: j["kind"] = "pass-trace"; break;
        case ScenarioKind::Shadow: j["kind"] = "shadow"; break;
        case ScenarioKind::Network: j["kind"] = "network"; break;
    }
    j["orbit"] = {{"altitude_km", sc.orbit.altitude_m / 1e3},
                  {"inclination_deg", rad2deg(sc.orbit.inclination_rad)},
                  {"raan_deg", rad2deg(sc.orbit.raan_rad)},
                  {"initial_phase_deg", rad2deg(sc.orbit.initial_phase_rad)},
                  {"direction", sc.orbit.direction == OrbitDirection::Prograde
                                    ? "prograde"
                                    : "retrograde"}};
    json stations = json::array();
    for (const GroundStationConfig& g : sc.stations)
        stations.push_back({{"name", g.name},
                            {"latitude_deg", rad2deg(g.latitude_rad)},
                            {"longitude_deg", rad2deg(g.longitude_rad)}});
    if (sc.kind == ScenarioKind::Network || sc.stations.size() != 1)
        j["ground_stations"] = stations;
    else if (!stations.empty())
        j["ground_station"] = stations[0];
    j["hardware"] = {{"wavelength_nm", sc.hardware.wavelength_m * 1e9},
                     {"tx_radius_sat_m", sc.hardware.tx_radius_sat_m},
                     {"tx_radius_gs_m", sc.hardware.tx_radius_gs_m},
                     {"rx_radius_sat_m", sc.hardware.rx_radius_sat_m},
                     {"rx_radius_gs_m", sc.hardware.rx_radius_gs_m},
                     {"det_eff_sat", sc.hardware.det_eff_sat},
                     {"det_eff_gs", sc.hardware.det_eff_gs},
                     {"eta_atm_zenith", sc.hardware.eta_atm_zenith},
                     {"fill_fraction", sc.hardware.fill_fraction}};
    j["source"] = {{"pair_rate_hz", sc.source.pair_rate_hz},
                   {"bkg_rate_gs_hz", sc.source.bkg_rate_gs_hz},
                   {"bkg_rate_sat_hz", sc.source.bkg_rate_sat_hz},
                   {"dark_rate_hz", sc.source.dark_rate_hz},
                   {"jitter_sigma_ps", sc.source.jitter_sigma_s * 1e12},
                   {"seed", sc.source.seed}};
    j["protocol"] = {{"t_bin_ns", sc.protocol.t_bin_s * 1e9},
                     {"n_min", sc.protocol.n_min},
                     {"snr_threshold", sc.protocol.snr_threshold},
                     {"holdover_s", sc.protocol.holdover_s},
                     {"sat_clock_precision_log10", sc.protocol.sat_clock_precision}};
    j["clock_offset_us"] = sc.clock.offset_s * 1e6;
    switch (sc.kind) {
        case ScenarioKind::SimulateLink:
            j["t_acq_s"] = sc.t_acq_s;
            j["start_s"] = sc.start_s;
            j["n_windows"] = sc.n_windows;
            j["tau_half_span_us"] = sc.tau_half_span_us;
            j["bin_width_ticks"] = sc.bin_width_ticks;
            j["dump_timestamps"] = sc.dump_timestamps;
            break;
        case ScenarioKind::PassTrace:
        case ScenarioKind::Network:
            j["duration_s"] = sc.duration_s;
            j["step_s"] = sc.step_s;
            break;
        case ScenarioKind::Shadow:
            j["grid_resolution_deg"] = sc.grid_resolution_deg;
            j["target_precision_log10"] = sc.target_precision_log10;
            j["epoch_s"] = sc.shadow_epoch_s;
            j["co_rotate_virtual_stations"] = sc.co_rotate_virtual_stations;
            break;
    }
    j["out_dir"] = sc.out_dir;
    j["threads"] = sc.threads;
    return j.dump(2);
}

}  // namespace qcs
