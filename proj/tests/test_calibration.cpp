#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "cvqkd/calibration.hpp"
#include "cvqkd/math.hpp"
#include "cvqkd/rng.hpp"
#include "cvqkd/stats.hpp"

namespace {

cvqkd::PulseTrainSpec default_spec() { return cvqkd::PulseTrainSpec{}; }

std::filesystem::path temp_trace_path(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("pulse train geometry of the default spec") {
    const auto spec = default_spec();
    CHECK_NOTHROW(spec.validate());
    CHECK(spec.samples_per_period() == 100);  // 100 MS/s at 1 MHz repetition
    CHECK(spec.samples_per_window() == 3);    // 30 ns at 10 ns per sample
}

TEST_CASE("pulse train validation rejects inconsistent geometry") {
    auto spec = default_spec();
    spec.pulse_width = 1.0 / spec.rep_rate;  // fills the whole period
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

    spec = default_spec();
    spec.sample_rate = 5.0 * spec.rep_rate;  // under-sampled
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

    spec = default_spec();
    spec.sample_rate = 1.05e7;  // 10.5 samples per period
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

    spec = default_spec();
    spec.pulse_width = 1e-9;  // shorter than one sample tick
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

    spec = default_spec();
    spec.gain = 0.0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

    spec = default_spec();
    spec.rep_rate = -1.0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("detector model validation and electronic noise level") {
    cvqkd::BalancedDetectorModel det;
    CHECK_NOTHROW(det.validate());
    // sigma = gain * sqrt(clearance / 4) at the default 3.7% clearance.
    CHECK(det.electronic_sigma() == doctest::Approx(std::sqrt(0.037 * 0.25)).epsilon(1e-14));

    det.gain = -1.0;
    CHECK_THROWS_AS(det.validate(), std::invalid_argument);
    det = {};
    det.operating_power_mw = 0.0;
    CHECK_THROWS_AS(det.validate(), std::invalid_argument);
    det = {};
    det.clearance = -0.1;
    CHECK_THROWS_AS(det.validate(), std::invalid_argument);
}

TEST_CASE("envelope energy: rectangular counts samples, gaussian is smaller") {
    auto spec = default_spec();
    CHECK(cvqkd::envelope_energy(spec) == doctest::Approx(3.0).epsilon(1e-14));

    spec.shape = cvqkd::PulseShape::gaussian;
    const double e = cvqkd::envelope_energy(spec);
    CHECK(e > 0.0);
    CHECK(e < 3.0);
}

TEST_CASE("noiseless synthesis and integration are inverse operations") {
    auto spec = default_spec();
    spec.gain = 1.7;
    auto rng = cvqkd::Rng::substream(1, cvqkd::Stream::calibration, 0);
    const std::vector<double> quadratures{0.95, -0.95, 0.3, 0.0, -1.2};

    const auto trace = cvqkd::synthesize_trace(quadratures, spec, 0.0, rng);
    REQUIRE(trace.size() == quadratures.size() * spec.samples_per_period());

    const auto back = cvqkd::integrate_pulses(trace, spec);
    REQUIRE(back.size() == quadratures.size());
    for (std::size_t i = 0; i < quadratures.size(); ++i) {
        // float32 storage bounds the round-trip accuracy.
        CHECK(back[i] == doctest::Approx(quadratures[i]).epsilon(1e-5));
    }
}

TEST_CASE("noiseless round trip with a gaussian envelope") {
    auto spec = default_spec();
    spec.pulse_width = 100e-9;  // 10-sample window for a smoother envelope
    spec.shape = cvqkd::PulseShape::gaussian;
    auto rng = cvqkd::Rng::substream(2, cvqkd::Stream::calibration, 0);
    const std::vector<double> quadratures{1.0, -0.5, 0.25};

    const auto trace = cvqkd::synthesize_trace(quadratures, spec, 0.0, rng);
    const auto back = cvqkd::integrate_pulses(trace, spec);
    for (std::size_t i = 0; i < quadratures.size(); ++i) {
        CHECK(back[i] == doctest::Approx(quadratures[i]).epsilon(1e-5));
    }
}

TEST_CASE("integration is linear in the trace") {
    auto spec = default_spec();
    auto rng = cvqkd::Rng::substream(3, cvqkd::Stream::calibration, 0);
    const std::vector<double> qa{0.4, -0.8, 1.1, 0.05};
    const std::vector<double> qb{-0.3, 0.6, -0.2, 0.9};

    const auto ta = cvqkd::synthesize_trace(qa, spec, 0.0, rng);
    const auto tb = cvqkd::synthesize_trace(qb, spec, 0.0, rng);
    std::vector<float> sum(ta.size());
    for (std::size_t i = 0; i < ta.size(); ++i) sum[i] = ta[i] + tb[i];

    const auto va = cvqkd::integrate_pulses(ta, spec);
    const auto vb = cvqkd::integrate_pulses(tb, spec);
    const auto vsum = cvqkd::integrate_pulses(sum, spec);
    for (std::size_t i = 0; i < qa.size(); ++i) {
        CHECK(vsum[i] == doctest::Approx(va[i] + vb[i]).epsilon(1e-5));
    }
}

TEST_CASE("electronic noise propagates to the advertised integrated variance") {
    auto spec = default_spec();
    spec.gain = 2.0;
    const double target_var = 0.02;
    const double sigma_e =
        spec.gain * std::sqrt(target_var * cvqkd::envelope_energy(spec));

    auto rng = cvqkd::Rng::substream(4, cvqkd::Stream::calibration, 0);
    const std::size_t n = 20000;
    std::vector<double> quadratures(n, 1.0);

    const auto trace = cvqkd::synthesize_trace(quadratures, spec, sigma_e, rng);
    const auto values = cvqkd::integrate_pulses(trace, spec);

    CHECK(cvqkd::mean(values) == doctest::Approx(1.0).epsilon(0.01));
    CHECK(cvqkd::sample_variance(values) == doctest::Approx(target_var).epsilon(0.05));
}

TEST_CASE("integration rejects ragged traces") {
    const auto spec = default_spec();
    std::vector<float> ragged(spec.samples_per_period() + 1, 0.0f);
    CHECK_THROWS_AS((void)cvqkd::integrate_pulses(ragged, spec), std::invalid_argument);
    std::vector<float> empty;
    CHECK_THROWS_AS((void)cvqkd::integrate_pulses(empty, spec), std::invalid_argument);
}

TEST_CASE("shot noise scan recovers clearance and unity-gain shot-noise unit") {
    cvqkd::BalancedDetectorModel det;  // gain 1, clearance 3.7%, 0.25 mW
    std::vector<double> powers;
    for (int i = 1; i <= 10; ++i) powers.push_back(0.05 * i);

    auto rng = cvqkd::Rng::substream(5, cvqkd::Stream::calibration, 0);
    const auto fit = cvqkd::shot_noise_scan(powers, 200000, det, rng);

    CHECK(fit.r_squared > 0.999);
    CHECK(fit.snu == doctest::Approx(1.0).epsilon(0.02));
    CHECK(std::abs(fit.clearance - 0.037) < 0.008);
    // Raw-unit slope: shot variance 1/4 at 0.25 mW means slope 1 per mW.
    CHECK(fit.slope == doctest::Approx(1.0).epsilon(0.02));
    CHECK(fit.intercept == doctest::Approx(0.037 * 0.25).epsilon(0.5));
}

TEST_CASE("shot noise scan sees the detector gain as a squared unit factor") {
    cvqkd::BalancedDetectorModel det;
    det.gain = 2.2;
    std::vector<double> powers{0.05, 0.1, 0.15, 0.25, 0.35, 0.5};

    auto rng = cvqkd::Rng::substream(6, cvqkd::Stream::calibration, 0);
    const auto fit = cvqkd::shot_noise_scan(powers, 200000, det, rng);
    CHECK(fit.snu == doctest::Approx(2.2 * 2.2).epsilon(0.02));
    CHECK(std::abs(fit.clearance - 0.037) < 0.01);

    // Normalizing raw samples scaled by the gain restores vacuum variance 1/4.
    auto noise_rng = cvqkd::Rng::substream(7, cvqkd::Stream::calibration, 0);
    std::vector<double> raw(50000);
    for (auto& r : raw) r = det.gain * noise_rng.gaussian(0.0, std::sqrt(0.25));
    const auto normalized = cvqkd::snu_normalize(raw, fit);
    CHECK(cvqkd::sample_variance(normalized) == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("shot noise scan argument checks") {
    cvqkd::BalancedDetectorModel det;
    auto rng = cvqkd::Rng::substream(8, cvqkd::Stream::calibration, 0);
    std::vector<double> two{0.1, 0.2};
    CHECK_THROWS_AS((void)cvqkd::shot_noise_scan(two, 100, det, rng), std::invalid_argument);
    std::vector<double> repeated{0.1, 0.1, 0.1, 0.1};
    CHECK_THROWS_AS((void)cvqkd::shot_noise_scan(repeated, 100, det, rng), std::invalid_argument);
    std::vector<double> with_zero{0.0, 0.1, 0.2};
    CHECK_THROWS_AS((void)cvqkd::shot_noise_scan(with_zero, 100, det, rng), std::invalid_argument);
    std::vector<double> fine{0.1, 0.2, 0.3};
    CHECK_THROWS_AS((void)cvqkd::shot_noise_scan(fine, 1, det, rng), std::invalid_argument);
}

TEST_CASE("snu normalization scales by the square root and validates the unit") {
    cvqkd::ShotNoiseFit fit;
    fit.snu = 4.0;
    const std::vector<double> raw{2.0, -6.0, 0.0};
    const auto out = cvqkd::snu_normalize(raw, fit);
    CHECK(out[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(out[1] == doctest::Approx(-3.0).epsilon(1e-14));
    CHECK(out[2] == doctest::Approx(0.0));

    fit.snu = 0.0;
    CHECK_THROWS_AS((void)cvqkd::snu_normalize(raw, fit), std::invalid_argument);
}

TEST_CASE("trace files round trip samples and spec exactly") {
    auto spec = default_spec();
    spec.gain = 3.25;
    spec.pulse_width = 50e-9;
    spec.shape = cvqkd::PulseShape::gaussian;

    auto rng = cvqkd::Rng::substream(9, cvqkd::Stream::calibration, 0);
    const std::vector<double> quadratures{0.7, -0.1, 1.3};
    const auto trace = cvqkd::synthesize_trace(quadratures, spec, 0.05, rng);

    const auto path = temp_trace_path("calibration_roundtrip_test.f32");
    cvqkd::save_trace(path.string(), trace, spec);

    cvqkd::PulseTrainSpec loaded_spec;
    const auto loaded = cvqkd::load_trace(path.string(), loaded_spec);
    REQUIRE(loaded.size() == trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) CHECK(loaded[i] == trace[i]);
    CHECK(loaded_spec.sample_rate == spec.sample_rate);
    CHECK(loaded_spec.rep_rate == spec.rep_rate);
    CHECK(loaded_spec.pulse_width == spec.pulse_width);
    CHECK(loaded_spec.gain == spec.gain);
    CHECK(loaded_spec.shape == spec.shape);

    std::filesystem::remove(path);
    std::filesystem::remove(path.string() + ".json");
}

TEST_CASE("loading a missing trace reports the sidecar") {
    cvqkd::PulseTrainSpec spec;
    CHECK_THROWS_AS((void)cvqkd::load_trace("/nonexistent/trace.f32", spec), std::runtime_error);
}
