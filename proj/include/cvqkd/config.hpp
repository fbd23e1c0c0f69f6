#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvqkd/calibration.hpp"
#include "cvqkd/security.hpp"

namespace cvqkd {

/// Raised for malformed or out-of-range configuration; the message names the
/// offending field path.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Fig2Config {
    double t_min = 0.02;
    double t_max = 1.0;
    double t_step = 0.02;
    std::vector<double> xis{0.01, 0.02, 0.05};
    double loss_db_per_km = 0.2;
};

struct Fig3Config {
    std::uint64_t n_pulses = 200000;
    std::size_t hist_bins = 80;
    double hist_lo = -4.0;
    double hist_hi = 4.0;
};

struct Fig4Config {
    double x0_min = 0.0;
    double x0_max = 2.0;
    double x0_step = 0.1;
    std::vector<double> photon_numbers{0.5, 1.0, 2.0};
    std::uint64_t mc_pulses = 100000;
};

struct Table1Config {
    double transmittance = 0.95;
    double eta = 0.76;
    double xi_ch = 0.02;
    double xi_ele = 0.0;
    double mean_photon = 1.0;
    double x0 = 0.0;
    std::uint64_t n_pulses = 81000;
};

struct E2eConfig {
    std::size_t ldpc_n = 4096;
    std::uint64_t ldpc_seed = 7;
    std::uint32_t max_iters = 100;
    double epsilon_margin = 100.0;
};

struct CalibrateConfig {
    std::vector<double> lo_powers_mw{0.025, 0.05, 0.075, 0.1,   0.125, 0.15, 0.175,
                                     0.2,   0.225, 0.25, 0.275, 0.3,   0.325, 0.35,
                                     0.375, 0.4,  0.425, 0.45,  0.475, 0.5};
    std::size_t n_pulses_each = 100000;
    double detector_gain = 1.0;
    double clearance = 0.037;
    double operating_power_mw = 0.25;
    std::uint64_t n_consistency_pulses = 81000;
    PulseTrainSpec trace{};
};

enum class OutputFormat : std::uint8_t { csv = 0, json = 1 };

struct OutputConfig {
    std::string dir = "out";
    OutputFormat format = OutputFormat::csv;
};

struct ExperimentConfig {
    std::uint64_t seed = 20240711;
    ProtocolParams protocol{};
    ReconciliationParams recon{};
    AttackModel attack{};
    Fig2Config fig2{};
    Fig3Config fig3{};
    Fig4Config fig4{};
    Table1Config table1{};
    E2eConfig e2e{};
    CalibrateConfig calibrate{};
    OutputConfig output{};

    /// Canonical serialized form and its 64-bit FNV-1a hash; both are fixed
    /// by the resolved field values and stamped into every output file.
    std::string canonical_json;
    std::uint64_t config_hash = 0;
};

/// Builds the configuration from defaults, an optional JSON file, and
/// dotted-path overrides (e.g. "protocol.x0=0.5"), in that order. Unknown
/// keys and invalid values raise ConfigError naming the field path.
ExperimentConfig load_config(const std::string& config_path,
                             const std::vector<std::string>& overrides);

std::uint64_t fnv1a64(const std::string& text);

std::string to_string(OutputFormat format);

}  // namespace cvqkd
