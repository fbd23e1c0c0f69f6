#include <cstdio>
#include <exception>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "cvqkd/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitReconciliationFailure = 3;

void print_files(const std::vector<std::string>& files) {
    for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
}

int dispatch(const std::string& command, const cvqkd::ExperimentConfig& config) {
    if (command == "fig2") {
        const auto result = cvqkd::run_fig2(config);
        std::printf("fig2: %zu grid points\n", result.rows.size());
        print_files(result.files);
        return kExitOk;
    }
    if (command == "fig3") {
        const auto result = cvqkd::run_fig3(config);
        std::printf("fig3: %llu sifted pulses, mismatched-phase KS p = %s\n",
                    static_cast<unsigned long long>(result.sifted_count),
                    cvqkd::format_double(result.ks_p_value).c_str());
        print_files(result.files);
        return kExitOk;
    }
    if (command == "fig4") {
        const auto result = cvqkd::run_fig4(config);
        std::printf("fig4: %zu threshold points\n", result.rows.size());
        print_files(result.files);
        return kExitOk;
    }
    if (command == "table1") {
        const auto result = cvqkd::run_table1(config);
        std::printf("table1: sifted %llu, QBER %s, key/pulse %s\n",
                    static_cast<unsigned long long>(result.sifted_count),
                    cvqkd::format_double(result.qber_empirical).c_str(),
                    cvqkd::format_double(result.key_per_pulse).c_str());
        print_files(result.files);
        return kExitOk;
    }
    if (command == "e2e") {
        const auto result = cvqkd::run_e2e(config);
        std::printf("e2e: %llu/%llu blocks reconciled, final key %llu bits, %s\n",
                    static_cast<unsigned long long>(result.blocks_ok),
                    static_cast<unsigned long long>(result.blocks_total),
                    static_cast<unsigned long long>(result.final_key_bits),
                    result.success ? (result.zero_key ? "zero-key outcome" : "keys match")
                                   : "FAILED");
        print_files(result.files);
        return result.success ? kExitOk : kExitReconciliationFailure;
    }
    if (command == "calibrate") {
        const auto result = cvqkd::run_calibrate(config);
        std::printf("calibrate: clearance %s (configured %s), fit r^2 %s\n",
                    cvqkd::format_double(result.fit.clearance).c_str(),
                    cvqkd::format_double(config.calibrate.clearance).c_str(),
                    cvqkd::format_double(result.fit.r_squared).c_str());
        print_files(result.files);
        return kExitOk;
    }
    std::fprintf(stderr, "unknown command '%s'\n", command.c_str());
    return kExitConfigError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Four-phase continuous-variable QKD simulator and analysis toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    std::string format;
    std::string seed;
    std::vector<std::string> sets;
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--seed", seed, "master random seed (overrides the config)");
    app.add_option("--out", out_dir, "output directory (overrides the config)");
    app.add_option("--format", format, "output format: csv or json");
    app.add_option("--set", sets, "dotted-path override, e.g. protocol.x0=0.5 (repeatable)");

    const std::pair<const char*, const char*> commands[] = {
        {"fig2", "key rate vs transmittance for a set of excess-noise levels"},
        {"fig3", "sifted quadrature histograms and phase statistics"},
        {"fig4", "post-selection efficiency and QBER vs threshold, theory and Monte Carlo"},
        {"table1", "single operating point report"},
        {"e2e", "full pipeline: sifting, reconciliation, privacy amplification"},
        {"calibrate", "shot-noise calibration scan and waveform consistency check"},
    };
    for (const auto& [name, help] : commands) {
        app.add_subcommand(name, help)->silent(false);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    std::vector<std::string> overrides;
    if (!seed.empty()) overrides.push_back("seed=" + seed);
    if (!out_dir.empty()) overrides.push_back("output.dir=" + out_dir);
    if (!format.empty()) overrides.push_back("output.format=" + format);
    overrides.insert(overrides.end(), sets.begin(), sets.end());

    try {
        const cvqkd::ExperimentConfig config = cvqkd::load_config(config_path, overrides);
        const std::string command = app.get_subcommands().front()->get_name();
        return dispatch(command, config);
    } catch (const cvqkd::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config: %s\n", e.what());
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
