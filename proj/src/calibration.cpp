#include "cvqkd/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "cvqkd/math.hpp"

namespace cvqkd {

void PulseTrainSpec::validate() const {
    if (!(rep_rate > 0.0)) throw std::invalid_argument("PulseTrainSpec: rep_rate must be positive");
    if (!(pulse_width > 0.0 && pulse_width < 1.0 / rep_rate)) {
        throw std::invalid_argument("PulseTrainSpec: pulse_width must be positive and below the period");
    }
    if (!(sample_rate >= 10.0 * rep_rate)) {
        throw std::invalid_argument("PulseTrainSpec: sample_rate must be at least 10x rep_rate");
    }
    if (!(gain > 0.0)) throw std::invalid_argument("PulseTrainSpec: gain must be positive");
    const double per_period = sample_rate / rep_rate;
    if (std::abs(per_period - std::round(per_period)) > 1e-6) {
        throw std::invalid_argument("PulseTrainSpec: sample_rate must be a multiple of rep_rate");
    }
    if (samples_per_window() < 1) {
        throw std::invalid_argument("PulseTrainSpec: pulse window shorter than one sample");
    }
    if (samples_per_window() >= samples_per_period()) {
        throw std::invalid_argument("PulseTrainSpec: no gap samples left for the baseline");
    }
}

std::size_t PulseTrainSpec::samples_per_period() const {
    return static_cast<std::size_t>(std::llround(sample_rate / rep_rate));
}

std::size_t PulseTrainSpec::samples_per_window() const {
    return static_cast<std::size_t>(std::llround(pulse_width * sample_rate));
}

void BalancedDetectorModel::validate() const {
    if (!(gain > 0.0)) throw std::invalid_argument("BalancedDetectorModel: gain must be positive");
    if (!(clearance >= 0.0)) throw std::invalid_argument("BalancedDetectorModel: negative clearance");
    if (!(operating_power_mw > 0.0)) {
        throw std::invalid_argument("BalancedDetectorModel: operating power must be positive");
    }
}

double BalancedDetectorModel::electronic_sigma() const {
    validate();
    return gain * std::sqrt(clearance * kVacuumVariance);
}

namespace {

/// Normalized pulse envelope over the window samples. Rectangular is all
/// ones; gaussian peaks at 1 mid-window with the +-3 sigma span inside.
std::vector<double> envelope(const PulseTrainSpec& spec) {
    const std::size_t n = spec.samples_per_window();
    std::vector<double> g(n, 1.0);
    if (spec.shape == PulseShape::gaussian) {
        const double mid = 0.5 * static_cast<double>(n - 1);
        const double sigma = std::max(1e-12, static_cast<double>(n) / 6.0);
        for (std::size_t k = 0; k < n; ++k) {
            const double d = (static_cast<double>(k) - mid) / sigma;
            g[k] = std::exp(-0.5 * d * d);
        }
    }
    return g;
}

}  // namespace

double envelope_energy(const PulseTrainSpec& spec) {
    spec.validate();
    const std::vector<double> g = envelope(spec);
    double acc = 0.0;
    for (double v : g) acc += v * v;
    return acc;
}

std::vector<float> synthesize_trace(const std::vector<double>& quadratures,
                                    const PulseTrainSpec& spec, double electronic_sigma, Rng& rng) {
    spec.validate();
    if (!(electronic_sigma >= 0.0)) {
        throw std::invalid_argument("synthesize_trace: negative noise level");
    }
    const std::size_t period = spec.samples_per_period();
    const std::size_t window = spec.samples_per_window();
    const std::vector<double> g = envelope(spec);

    std::vector<float> trace(quadratures.size() * period, 0.0f);
    std::size_t pos = 0;
    for (double q : quadratures) {
        for (std::size_t k = 0; k < period; ++k, ++pos) {
            double value = k < window ? spec.gain * q * g[k] : 0.0;
            if (electronic_sigma > 0.0) value += rng.gaussian(0.0, electronic_sigma);
            trace[pos] = static_cast<float>(value);
        }
    }
    return trace;
}

std::vector<double> integrate_pulses(const std::vector<float>& trace, const PulseTrainSpec& spec) {
    spec.validate();
    const std::size_t period = spec.samples_per_period();
    if (trace.empty() || trace.size() % period != 0) {
        throw std::invalid_argument("integrate_pulses: trace does not cover whole pulse periods");
    }
    const std::size_t window = spec.samples_per_window();
    const std::vector<double> g = envelope(spec);
    double g_sq = 0.0;
    for (double v : g) g_sq += v * v;

    const std::size_t n_pulses = trace.size() / period;

    // Baseline: mean of every inter-pulse gap sample in the acquisition.
    double baseline = 0.0;
    std::size_t n_gap = 0;
    for (std::size_t p = 0; p < n_pulses; ++p) {
        const std::size_t start = p * period;
        for (std::size_t k = window; k < period; ++k) {
            baseline += trace[start + k];
            ++n_gap;
        }
    }
    baseline /= static_cast<double>(n_gap);

    std::vector<double> values(n_pulses);
    for (std::size_t p = 0; p < n_pulses; ++p) {
        const std::size_t start = p * period;
        double acc = 0.0;
        for (std::size_t k = 0; k < window; ++k) {
            acc += g[k] * (static_cast<double>(trace[start + k]) - baseline);
        }
        values[p] = acc / (spec.gain * g_sq);
    }
    return values;
}

ShotNoiseFit shot_noise_scan(const std::vector<double>& lo_powers_mw, std::size_t n_pulses_each,
                             const BalancedDetectorModel& detector, Rng& rng) {
    detector.validate();
    if (n_pulses_each < 2) throw std::invalid_argument("shot_noise_scan: need at least 2 pulses");
    std::vector<double> distinct = lo_powers_mw;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 3) {
        throw std::invalid_argument("shot_noise_scan: need at least 3 distinct LO powers");
    }
    for (double p : lo_powers_mw) {
        if (!(p > 0.0)) throw std::invalid_argument("shot_noise_scan: powers must be positive");
    }

    const double sigma_e = detector.electronic_sigma();
    std::vector<double> variances(lo_powers_mw.size());
    std::vector<double> samples(n_pulses_each);
    for (std::size_t i = 0; i < lo_powers_mw.size(); ++i) {
        const double scale =
            detector.gain * std::sqrt(lo_powers_mw[i] / detector.operating_power_mw);
        for (auto& s : samples) {
            const double vacuum = rng.gaussian(0.0, std::sqrt(kVacuumVariance));
            s = scale * vacuum + rng.gaussian(0.0, sigma_e);
        }
        variances[i] = sample_variance(samples);
    }

    const LinearFit fit = linear_fit(lo_powers_mw, variances);
    ShotNoiseFit out;
    out.slope = fit.slope;
    out.intercept = fit.intercept;
    out.r_squared = fit.r_squared;
    out.snu = fit.slope * detector.operating_power_mw / kVacuumVariance;
    out.clearance = fit.intercept / (fit.slope * detector.operating_power_mw);
    return out;
}

std::vector<double> snu_normalize(const std::vector<double>& raw_values, const ShotNoiseFit& fit) {
    if (!(fit.snu > 0.0)) throw std::invalid_argument("snu_normalize: non-positive shot-noise unit");
    const double scale = 1.0 / std::sqrt(fit.snu);
    std::vector<double> out(raw_values.size());
    for (std::size_t i = 0; i < raw_values.size(); ++i) out[i] = raw_values[i] * scale;
    return out;
}

void save_trace(const std::string& path, const std::vector<float>& trace,
                const PulseTrainSpec& spec) {
    spec.validate();
    std::ofstream bin(path, std::ios::binary);
    if (!bin) throw std::runtime_error("save_trace: cannot open " + path);
    static_assert(sizeof(float) == 4);
    bin.write(reinterpret_cast<const char*>(trace.data()),
              static_cast<std::streamsize>(trace.size() * sizeof(float)));
    if (!bin) throw std::runtime_error("save_trace: write failed for " + path);

    nlohmann::json sidecar{
        {"sample_rate", spec.sample_rate},
        {"rep_rate", spec.rep_rate},
        {"pulse_width", spec.pulse_width},
        {"gain", spec.gain},
        {"shape", spec.shape == PulseShape::gaussian ? "gaussian" : "rectangular"},
    };
    std::ofstream meta(path + ".json");
    if (!meta) throw std::runtime_error("save_trace: cannot open " + path + ".json");
    meta << sidecar.dump(2) << '\n';
}

std::vector<float> load_trace(const std::string& path, PulseTrainSpec& spec_out) {
    std::ifstream meta(path + ".json");
    if (!meta) throw std::runtime_error("load_trace: missing sidecar " + path + ".json");
    nlohmann::json sidecar = nlohmann::json::parse(meta);
    PulseTrainSpec spec;
    spec.sample_rate = sidecar.at("sample_rate").get<double>();
    spec.rep_rate = sidecar.at("rep_rate").get<double>();
    spec.pulse_width = sidecar.at("pulse_width").get<double>();
    spec.gain = sidecar.at("gain").get<double>();
    const std::string shape = sidecar.value("shape", "rectangular");
    spec.shape = shape == "gaussian" ? PulseShape::gaussian : PulseShape::rectangular;
    spec.validate();

    std::ifstream bin(path, std::ios::binary | std::ios::ate);
    if (!bin) throw std::runtime_error("load_trace: cannot open " + path);
    const auto bytes = static_cast<std::size_t>(bin.tellg());
    if (bytes % sizeof(float) != 0) throw std::runtime_error("load_trace: truncated sample data");
    std::vector<float> trace(bytes / sizeof(float));
    bin.seekg(0);
    bin.read(reinterpret_cast<char*>(trace.data()), static_cast<std::streamsize>(bytes));
    if (!bin) throw std::runtime_error("load_trace: read failed for " + path);
    spec_out = spec;
    return trace;
}

}  // namespace cvqkd
