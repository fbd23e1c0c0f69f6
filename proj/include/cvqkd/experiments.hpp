#pragma once

#include <string>
#include <vector>

#include "cvqkd/config.hpp"
#include "cvqkd/postprocess.hpp"

namespace cvqkd {

/// Key-rate and mutual-information curves over the transmittance grid.
/// Writes fig2_key_rate.{csv,json}.
struct Fig2Result {
    std::vector<KeyRateSweepRow> rows;
    std::vector<std::string> files;
};
Fig2Result run_fig2(const ExperimentConfig& config);

/// Homodyne output distributions per relative phase, with Gaussian fits and
/// the mismatched-phase similarity test. Writes fig3_histograms and
/// fig3_summary.
struct Fig3PhaseStats {
    int rel_phase_deg = 0;
    std::uint64_t n_samples = 0;
    double mean = 0.0;
    double variance = 0.0;
};
struct Fig3Result {
    std::vector<Fig3PhaseStats> phases;   // 0, 90, 180, 270
    double ks_statistic = 0.0;            // 90 vs 270 degree samples
    double ks_p_value = 0.0;
    std::uint64_t sifted_count = 0;
    std::vector<std::string> files;
};
Fig3Result run_fig3(const ExperimentConfig& config);

/// Post-selection efficiency and error rate vs threshold, closed form next to
/// Monte Carlo. Writes fig4_threshold.
struct Fig4Row {
    double x0 = 0.0;
    double mean_photon = 0.0;
    double pse_theory = 0.0;
    double qber_theory = 0.0;
    double pse_mc = 0.0;
    double qber_mc = 0.0;
    std::uint64_t n_sifted = 0;
    std::uint64_t n_conclusive = 0;
};
struct Fig4Result {
    std::vector<Fig4Row> rows;
    std::vector<std::string> files;
};
Fig4Result run_fig4(const ExperimentConfig& config);

/// Single-run protocol summary at the experiment operating point with the
/// information-theoretic key length. Writes table1_report.
struct Table1Result {
    std::uint64_t n_pulses = 0;
    std::uint64_t sifted_count = 0;
    std::uint64_t conclusive_count = 0;
    double pse_empirical = 0.0;
    double qber_empirical = 0.0;
    double qber_theory = 0.0;
    KeyRateReport key_rate;
    std::uint64_t final_key_bits = 0;  // final_key_length at the conclusive count
    double key_per_pulse = 0.0;
    std::vector<std::string> files;
};
Table1Result run_table1(const ExperimentConfig& config);

/// Full pipeline through reconciliation and hashing. Writes e2e_report.
struct E2eResult {
    bool success = false;   // keys identical (or clean zero-key outcome)
    bool zero_key = false;  // channel too noisy for any key, reported gracefully
    std::uint64_t sifted_count = 0;
    std::uint64_t conclusive_count = 0;
    double qber_estimate = 0.0;
    std::uint64_t blocks_total = 0;
    std::uint64_t blocks_ok = 0;
    std::uint64_t reconciled_bits = 0;
    LeakageLedger ledger;
    std::uint64_t final_key_bits = 0;
    std::string alice_key_hex;
    std::string bob_key_hex;
    std::vector<std::string> files;
};
E2eResult run_e2e(const ExperimentConfig& config);

/// Shot-noise scan plus the trace-versus-direct consistency run. Writes
/// calibrate_fit and calibrate_consistency.
struct CalibrateResult {
    ShotNoiseFit fit;
    RunSummary direct;
    RunSummary via_trace;
    std::vector<std::string> files;
};
CalibrateResult run_calibrate(const ExperimentConfig& config);

/// "%.17g" rendering used for every floating-point value written to disk.
std::string format_double(double value);

}  // namespace cvqkd
