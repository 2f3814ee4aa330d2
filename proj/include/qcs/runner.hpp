#ifndef QCS_RUNNER_HPP
#define QCS_RUNNER_HPP

#include <string>

#include "qcs/scenario.hpp"

namespace qcs {

/**
 * Execute one scenario and write its CSV outputs plus a manifest recording
 * the resolved config and output checksums. Returns the process exit code
 * contract: 0 on success (including flagged-but-empty outputs), throws
 * ConfigError for bad configs and std::runtime_error for runtime failures.
 */
void run_scenario(const Scenario& scenario);

/**
 * Offset recovery on dumped timestamp files (the `analyze` subcommand):
 * reads one uplink and one downlink dump, builds both histograms around the
 * configured tau windows, and writes histogram CSVs plus an offset report.
 */
struct AnalyzeOptions {
    std::string uplink_dump;
    std::string downlink_dump;
    double tau_center_ab_us = 0.0;
    double tau_center_ba_us = 0.0;
    double tau_half_span_us = 15.0;
    uint32_t bin_width_ticks = 1;
    double snr_threshold = 5.0;
    std::string out_dir = "out";
};

void run_analyze(const AnalyzeOptions& opts);

}  // namespace qcs

#endif  // QCS_RUNNER_HPP
