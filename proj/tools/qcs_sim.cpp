// Command-line driver: scenario runners plus offline offset analysis.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime failure.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "qcs/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Satellite quantum clock synchronization simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    long long seed = -1;
    int threads = 0;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Scenario JSON file")->required();
        cmd->add_option("--seed", seed, "Override the scenario seed");
        cmd->add_option("--out", out_dir, "Override the output directory");
        cmd->add_option("--threads", threads, "Worker threads");
    };

    CLI::App* sim = app.add_subcommand("simulate-link", "Two-way photon Monte Carlo");
    CLI::App* trace = app.add_subcommand("pass-trace", "Analytic per-epoch link trace");
    CLI::App* shadow = app.add_subcommand("shadow", "Precision shadow grid");
    CLI::App* network = app.add_subcommand("network", "Multi-station sync timelines");
    for (CLI::App* c : {sim, trace, shadow, network}) add_common(c);

    CLI::App* analyze =
        app.add_subcommand("analyze", "Offset recovery on dumped timestamps");
    qcs::AnalyzeOptions aopts;
    analyze->add_option("--uplink", aopts.uplink_dump, "Uplink timestamp dump")->required();
    analyze->add_option("--downlink", aopts.downlink_dump, "Downlink timestamp dump")
        ->required();
    analyze->add_option("--tau-center-ab-us", aopts.tau_center_ab_us,
                        "Histogram center for the uplink direction [us]");
    analyze->add_option("--tau-center-ba-us", aopts.tau_center_ba_us,
                        "Histogram center for the downlink direction [us]");
    analyze->add_option("--tau-half-span-us", aopts.tau_half_span_us,
                        "Histogram half width [us]");
    analyze->add_option("--bin-width-ticks", aopts.bin_width_ticks, "Histogram bin width");
    analyze->add_option("--snr-threshold", aopts.snr_threshold, "Peak SNR threshold");
    analyze->add_option("--out", aopts.out_dir, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) {
            qcs::run_analyze(aopts);
            return 0;
        }
        qcs::Scenario sc = qcs::load_scenario(config_path);
        if (seed >= 0) sc.source.seed = static_cast<uint64_t>(seed);
        if (!out_dir.empty()) sc.out_dir = out_dir;
        if (threads > 0) sc.threads = threads;

        const auto want = [&](qcs::ScenarioKind k, const CLI::App* cmd) {
            if (cmd->parsed() && sc.kind != k)
                throw qcs::ConfigError("config error at 'kind': scenario kind does not "
                                       "match the subcommand");
        };
        want(qcs::ScenarioKind::SimulateLink, sim);
        want(qcs::ScenarioKind::PassTrace, trace);
        want(qcs::ScenarioKind::Shadow, shadow);
        want(qcs::ScenarioKind::Network, network);

        qcs::run_scenario(sc);
        return 0;
    } catch (const qcs::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime failure: %s\n", e.what());
        return 3;
    }
}
