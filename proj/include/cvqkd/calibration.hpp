#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cvqkd/rng.hpp"
#include "cvqkd/stats.hpp"

namespace cvqkd {

enum class PulseShape : std::uint8_t { rectangular = 0, gaussian = 1 };

/// Pulsed acquisition geometry. Defaults: 1 MHz repetition, 30 ns pulses,
/// 100 MS/s sampling.
struct PulseTrainSpec {
    double rep_rate = 1e6;
    double pulse_width = 30e-9;
    double sample_rate = 1e8;
    double gain = 1.0;
    PulseShape shape = PulseShape::rectangular;

    /// Requires pulse_width < period, sample_rate >= 10x rep_rate, an integer
    /// number of samples per period, and at least one sample in the window.
    void validate() const;

    std::size_t samples_per_period() const;
    std::size_t samples_per_window() const;
};

/// Balanced detector model used to synthesize calibration data: output scale
/// gain, electronic-to-shot clearance at the operating LO power.
struct BalancedDetectorModel {
    double gain = 1.0;
    double clearance = 0.037;
    double operating_power_mw = 0.25;

    void validate() const;

    /// Raw-unit electronic standard deviation (shot variance at the operating
    /// power is gain^2/4).
    double electronic_sigma() const;
};

struct ShotNoiseFit {
    double slope = 0.0;      // raw variance per mW of LO power
    double intercept = 0.0;  // electronic variance, raw units
    double r_squared = 0.0;
    double snu = 0.0;        // slope * operating power / (1/4)
    double clearance = 0.0;  // intercept / (slope * operating power)
};

/// Sum of squared envelope weights over the pulse window (the matched filter
/// norm); the per-sample electronic sigma that yields integrated electronic
/// variance v is sqrt(v * envelope_energy) * gain.
double envelope_energy(const PulseTrainSpec& spec);

/// One waveform sample per clock tick: pulse windows carry gain * quadrature
/// shaped by the pulse envelope, every sample gets white electronic noise of
/// the given standard deviation.
std::vector<float> synthesize_trace(const std::vector<double>& quadratures,
                                    const PulseTrainSpec& spec, double electronic_sigma, Rng& rng);

/// Matched-filter pulse integration with the baseline taken from the
/// inter-pulse gaps of this acquisition. Inverse of synthesize_trace in
/// expectation. Throws if the trace does not cover whole periods.
std::vector<double> integrate_pulses(const std::vector<float>& trace, const PulseTrainSpec& spec);

/// Vacuum-variance vs LO-power scan and linear fit. Requires at least three
/// distinct powers.
ShotNoiseFit shot_noise_scan(const std::vector<double>& lo_powers_mw, std::size_t n_pulses_each,
                             const BalancedDetectorModel& detector, Rng& rng);

/// Scales raw integrated values so vacuum variance is 1/4. Throws if the fit
/// has a non-positive shot-noise unit.
std::vector<double> snu_normalize(const std::vector<double>& raw_values, const ShotNoiseFit& fit);

/// Binary little-endian float32 samples; sidecar JSON at path + ".json" with
/// sample_rate, rep_rate, pulse_width, gain, shape.
void save_trace(const std::string& path, const std::vector<float>& trace,
                const PulseTrainSpec& spec);
std::vector<float> load_trace(const std::string& path, PulseTrainSpec& spec_out);

}  // namespace cvqkd
