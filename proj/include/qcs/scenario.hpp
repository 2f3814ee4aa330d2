#ifndef QCS_SCENARIO_HPP
#define QCS_SCENARIO_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "qcs/network.hpp"
#include "qcs/shadow.hpp"

namespace qcs {

/** Configuration error with the offending field path. */
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class ScenarioKind { SimulateLink, PassTrace, Shadow, Network };

/**
 * One fully resolved run configuration. Config files carry units in the key
 * names (altitude_km, rate_hz, offset_us); everything here is SI.
 */
struct Scenario {
    ScenarioKind kind = ScenarioKind::SimulateLink;

    OrbitConfig orbit;
    std::vector<GroundStationConfig> stations;  // 1 for link/trace, >=2 for network
    HardwareParams hardware;
    SourceParams source;
    ProtocolParams protocol;
    ClockModel clock;

    // simulate-link
    double t_acq_s = 5e-5;
    double start_s = 0.0;
    int n_windows = 1;
    double tau_half_span_us = 15.0;  // histogram half-width around the travel time
    uint32_t bin_width_ticks = 1;
    bool dump_timestamps = false;

    // pass-trace / network
    double duration_s = 86400.0;
    double step_s = 1.0;

    // shadow
    double grid_resolution_deg = 0.25;
    double target_precision_log10 = 9.0;
    double shadow_epoch_s = 0.0;
    bool co_rotate_virtual_stations = true;

    std::string out_dir = "out";
    int threads = 1;
};

/** Parse + validate a scenario (or a manifest wrapping one) from JSON text. */
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);

/** Resolved scenario back to canonical JSON (the manifest payload). */
std::string scenario_to_json(const Scenario& sc);

}  // namespace qcs

#endif  // QCS_SCENARIO_HPP
